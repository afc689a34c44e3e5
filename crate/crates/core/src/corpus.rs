//! Test-function corpora and weight families, built in or read from TOML.
//!
//! ```toml
//! [[function]]
//! id = "sign"
//! family = "sign"
//! valid_p = [1.0, inf]
//! tail_bound = 0.003
//!
//! [[function]]
//! id = "edge"
//! family = "endpoint"
//! upper = -0.25
//! valid_p = [1.0, 3.5]
//!
//! [[omega]]
//! id = "inv-square"
//! family = "power"
//! exponent = -2.0
//! ```

use std::fs;
use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::inequalities::WeightSequence;
use crate::transform::{FunctionKind, FunctionSpec};

/// Names accepted by [`Corpus::builtin`].
pub const BUILTIN_CORPORA: [&str; 2] = ["polys", "full"];

#[derive(Debug, Clone, Default)]
pub struct Corpus {
    pub functions: Vec<FunctionSpec>,
    pub omegas: Vec<WeightSequence>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CorpusFile {
    #[serde(default)]
    function: Vec<FunctionEntry>,
    #[serde(default)]
    omega: Vec<OmegaEntry>,
}

#[derive(Debug, Deserialize)]
struct FunctionEntry {
    id: String,
    #[serde(flatten)]
    family: FamilyEntry,
    valid_p: Option<[f64; 2]>,
    tail_bound: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
enum FamilyEntry {
    Monomial {
        coeffs: Vec<f64>,
    },
    Sign,
    Step,
    Abs,
    Endpoint {
        #[serde(default)]
        upper: f64,
        #[serde(default)]
        lower: f64,
    },
    Exp {
        rate: f64,
    },
    Cos {
        freq: f64,
    },
    Pole {
        at: f64,
    },
}

#[derive(Debug, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
enum OmegaEntry {
    Power {
        id: Option<String>,
        exponent: f64,
        truncation: Option<usize>,
    },
    Table {
        id: String,
        values: Vec<f64>,
    },
}

impl FamilyEntry {
    fn into_kind(self, id: &str) -> Result<FunctionKind> {
        let bad = |what: &str| Err(Error::Config(format!("function {id}: {what}")));
        Ok(match self {
            Self::Monomial { coeffs } => {
                if coeffs.is_empty() || coeffs.iter().any(|c| !c.is_finite()) {
                    return bad("monomial coefficients must be finite and non-empty");
                }
                FunctionKind::Monomial(coeffs)
            }
            Self::Sign => FunctionKind::Sign,
            Self::Step => FunctionKind::Step,
            Self::Abs => FunctionKind::Abs,
            Self::Endpoint { upper, lower } => {
                if !upper.is_finite() || !lower.is_finite() {
                    return bad("endpoint exponents must be finite");
                }
                FunctionKind::EndpointPower { upper, lower }
            }
            Self::Exp { rate } => FunctionKind::Exp { rate },
            Self::Cos { freq } => FunctionKind::Cos { freq },
            Self::Pole { at } => {
                if !(at.abs() > 1.0) {
                    return bad("pole must lie outside [-1, 1]");
                }
                FunctionKind::Pole { at }
            }
        })
    }
}

impl FunctionEntry {
    fn into_spec(self) -> Result<FunctionSpec> {
        let kind = self.family.into_kind(&self.id)?;
        let mut spec = FunctionSpec::new(self.id, kind);
        if let Some([lo, hi]) = self.valid_p {
            if !(lo >= 1.0 && hi >= lo) {
                return Err(Error::Config(format!(
                    "function {}: valid_p [{lo}, {hi}] is not a range inside [1, inf]",
                    spec.id
                )));
            }
            spec = spec.with_valid_p(lo, hi);
        }
        if let Some(b) = self.tail_bound {
            if !(b >= 0.0) {
                return Err(Error::Config(format!(
                    "function {}: tail_bound must be non-negative",
                    spec.id
                )));
            }
            spec = spec.with_tail_bound(b);
        }
        Ok(spec)
    }
}

impl OmegaEntry {
    fn into_weight(self) -> Result<WeightSequence> {
        match self {
            Self::Power {
                id,
                exponent,
                truncation,
            } => {
                if !exponent.is_finite() {
                    return Err(Error::Config("power weight exponent must be finite".into()));
                }
                let mut w = WeightSequence::power(exponent);
                if let Some(id) = id {
                    w = w.with_id(id);
                }
                if let Some(n) = truncation {
                    w = w.with_truncation(n);
                }
                Ok(w)
            }
            Self::Table { id, values } => WeightSequence::table(id, values),
        }
    }
}

/// Flattened family fields slip past `deny_unknown_fields`, so entries are checked by hand.
fn check_function_keys(table: &toml::Table) -> Result<()> {
    let Some(entries) = table.get("function").and_then(toml::Value::as_array) else {
        return Ok(());
    };
    for entry in entries.iter().filter_map(toml::Value::as_table) {
        let family_keys: &[&str] = match entry.get("family").and_then(toml::Value::as_str) {
            Some("monomial") => &["coeffs"],
            Some("endpoint") => &["upper", "lower"],
            Some("exp") => &["rate"],
            Some("cos") => &["freq"],
            Some("pole") => &["at"],
            _ => &[],
        };
        let common = ["id", "family", "valid_p", "tail_bound"];
        if let Some(key) = entry
            .keys()
            .find(|k| !common.contains(&k.as_str()) && !family_keys.contains(&k.as_str()))
        {
            let id = entry.get("id").and_then(toml::Value::as_str).unwrap_or("?");
            return Err(Error::Config(format!("function {id}: unknown key {key}")));
        }
    }
    Ok(())
}

impl Corpus {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let bad = |e: &dyn std::fmt::Display| Error::Config(format!("corpus config: {e}"));
        let table: toml::Table = text.parse().map_err(|e| bad(&e))?;
        check_function_keys(&table)?;
        let file: CorpusFile = table.try_into().map_err(|e| bad(&e))?;
        let functions = file
            .function
            .into_iter()
            .map(FunctionEntry::into_spec)
            .collect::<Result<Vec<_>>>()?;
        let mut seen = std::collections::HashSet::new();
        if let Some(dup) = functions.iter().find(|f| !seen.insert(f.id.as_str())) {
            return Err(Error::Config(format!("duplicate function id {}", dup.id)));
        }
        let omegas = file
            .omega
            .into_iter()
            .map(OmegaEntry::into_weight)
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { functions, omegas })
    }

    /// A built-in corpus name, or else a path to a TOML config.
    pub fn load(name_or_path: &str) -> Result<Self> {
        if let Some(c) = Self::builtin(name_or_path) {
            return Ok(c);
        }
        let text = fs::read_to_string(name_or_path).map_err(|e| {
            Error::Config(format!("cannot read corpus {name_or_path:?}: {e}"))
        })?;
        Self::from_toml_str(&text)
    }

    pub fn builtin(name: &str) -> Option<Self> {
        let functions = match name {
            "polys" => polynomials(),
            "full" => {
                let mut f = polynomials();
                f.extend(non_polynomials());
                f
            }
            _ => return None,
        };
        Some(Self {
            functions,
            omegas: Vec::new(),
        })
    }

    pub fn ids(&self) -> Vec<&str> {
        self.functions.iter().map(|f| f.id.as_str()).collect()
    }
}

/// Twelve polynomials of degree at most nine, coefficients in the monomial basis.
pub fn polynomials() -> Vec<FunctionSpec> {
    let rows: [(&str, &[f64]); 12] = [
        ("one", &[1.0]),
        ("t", &[0.0, 1.0]),
        ("t2", &[0.0, 0.0, 1.0]),
        ("affine", &[0.5, -2.0]),
        ("quad-mixed", &[1.0, 2.0, -1.0]),
        ("cubic-odd", &[0.0, -1.0, 0.0, 1.0]),
        ("cubic", &[0.25, -0.5, 3.0, 1.5]),
        ("quartic-even", &[1.0, 0.0, -4.0, 0.0, 4.0]),
        ("quintic", &[0.0, 0.3, 0.0, -1.2, 0.0, 2.0]),
        ("sextic", &[-1.0, 0.5, 2.0, 0.0, -3.0, 0.0, 1.0]),
        ("t8", &[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0]),
        ("nonic", &[0.1, -0.2, 0.3, -0.4, 0.5, -0.6, 0.7, -0.8, 0.9, -1.0]),
    ];
    rows.iter()
        .map(|(id, c)| FunctionSpec::new(*id, FunctionKind::Monomial(c.to_vec())).with_tail_bound(1e-12))
        .collect()
}

/// Non-polynomial items covering slow, endpoint-singular and fast decay.
///
/// Tail bounds are for the Legendre weight at degree 200: with squared tail
/// mass `T`, the norm gap is about `T / (2 ||f||)`, rounded up.
pub fn non_polynomials() -> Vec<FunctionSpec> {
    vec![
        // squared coefficients ~ 2/(pi k^2) on n = 2k+1, so T ~ 2/(100 pi)
        FunctionSpec::new("sign", FunctionKind::Sign).with_tail_bound(3e-3),
        FunctionSpec::new("step", FunctionKind::Step).with_tail_bound(1e-3),
        // squared coefficients ~ n^-5
        FunctionSpec::new("abs", FunctionKind::Abs).with_tail_bound(1e-7),
        FunctionSpec::new(
            "edge-minus-quarter",
            FunctionKind::EndpointPower {
                upper: -0.25,
                lower: 0.0,
            },
        )
        .with_valid_p(1.0, 3.5)
        .with_tail_bound(1e-3),
        FunctionSpec::new(
            "edge-half",
            FunctionKind::EndpointPower {
                upper: 0.5,
                lower: 0.0,
            },
        )
        .with_tail_bound(1e-9),
        FunctionSpec::new(
            "edge-lower-minus-third",
            FunctionKind::EndpointPower {
                upper: 0.0,
                lower: -1.0 / 3.0,
            },
        )
        .with_valid_p(1.0, 2.5)
        .with_tail_bound(1e-2),
        FunctionSpec::new("exp", FunctionKind::Exp { rate: 1.0 }).with_tail_bound(1e-12),
        FunctionSpec::new("cos3", FunctionKind::Cos { freq: 3.0 }).with_tail_bound(1e-12),
        FunctionSpec::new("pole2", FunctionKind::Pole { at: 2.0 }).with_tail_bound(1e-12),
    ]
}

/// Reads a weight table: numbers separated by whitespace or commas, `#` starts a comment.
pub fn read_weight_table(path: &Path) -> Result<WeightSequence> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read weight table {}: {e}", path.display())))?;
    let mut values = Vec::new();
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("");
        for tok in line.split(|c: char| c == ',' || c.is_whitespace()) {
            if tok.is_empty() {
                continue;
            }
            values.push(tok.parse::<f64>().map_err(|_| {
                Error::Config(format!("bad number {tok:?} in {}", path.display()))
            })?);
        }
    }
    let id = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "table".into());
    WeightSequence::table(id, values)
}

/// `pow:<e>` inline, otherwise a table file.
pub fn parse_weight(spec: &str) -> Result<WeightSequence> {
    if spec.starts_with("pow:") {
        WeightSequence::parse(spec)
    } else {
        read_weight_table(Path::new(spec))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inequalities::OmegaFamily;

    #[test]
    fn builtin_sizes() {
        assert_eq!(Corpus::builtin("polys").unwrap().functions.len(), 12);
        assert_eq!(Corpus::builtin("full").unwrap().functions.len(), 21);
        assert!(Corpus::builtin("nope").is_none());
    }

    #[test]
    fn builtin_ids_are_unique() {
        let c = Corpus::builtin("full").unwrap();
        let mut ids = c.ids();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), c.functions.len());
    }

    #[test]
    fn parse_config() {
        let text = r#"
            [[function]]
            id = "s"
            family = "sign"
            valid_p = [1.0, inf]
            tail_bound = 0.09

            [[function]]
            id = "e"
            family = "endpoint"
            upper = -0.25
            valid_p = [1, 3.5]

            [[function]]
            id = "m"
            family = "monomial"
            coeffs = [1, 0, 2]

            [[omega]]
            family = "power"
            exponent = -2
            truncation = 100

            [[omega]]
            id = "tab"
            family = "table"
            values = [1.0, 0.5, 0.25]
        "#;
        let c = Corpus::from_toml_str(text).unwrap();
        assert_eq!(c.ids(), ["s", "e", "m"]);
        assert_eq!(c.functions[0].valid_p, (1.0, f64::INFINITY));
        assert_eq!(c.functions[0].tail_bound, Some(0.09));
        assert_eq!(c.functions[1].valid_p, (1.0, 3.5));
        assert!((c.functions[2].eval(0.5) - 1.5).abs() < 1e-15);
        assert_eq!(c.omegas.len(), 2);
        assert_eq!(c.omegas[0].truncation(), 100);
        assert_eq!(c.omegas[0].family(), &OmegaFamily::Power { exponent: -2.0 });
        assert_eq!(c.omegas[1].id(), "tab");
    }

    #[test]
    fn config_errors() {
        for bad in [
            "[[function]]\nid = \"x\"\nfamily = \"wavelet\"",
            "[[function]]\nid = \"x\"\nfamily = \"pole\"\nat = 0.5",
            "[[function]]\nid = \"x\"\nfamily = \"sign\"\nvalid_p = [0.5, 2]",
            "[[function]]\nid = \"x\"\nfamily = \"sign\"\n[[function]]\nid = \"x\"\nfamily = \"abs\"",
            "[[omega]]\nid = \"t\"\nfamily = \"table\"\nvalues = [1, 0]",
            "[[functions]]\nid = \"x\"",
        ] {
            assert!(Corpus::from_toml_str(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn weight_table_file() {
        let dir = std::env::temp_dir().join(format!("jp-table-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("w.txt");
        fs::write(&path, "# weights\n1, 0.5\n0.25 0.125\n").unwrap();
        let w = parse_weight(path.to_str().unwrap()).unwrap();
        assert_eq!(w.id(), "w");
        assert_eq!(w.max_index(), Some(3));
        assert_eq!(w.eval(3), 0.125);
        fs::remove_dir_all(&dir).unwrap();
        assert!(parse_weight("pow:-1.5").is_ok());
        assert!(parse_weight("/does/not/exist").is_err());
    }
}
