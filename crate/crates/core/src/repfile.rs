//! JSON representation files.
//!
//! ```json
//! {
//!   "prime": 3,
//!   "group": {"kind": "free", "rank": 2},
//!   "generators": {"a": [["1", "1"], ["0", "1"]], "b": [["1", "0"], ["1", "1"]]}
//! }
//! ```
//!
//! `group` is one of `{"kind": "free", "rank": n}`, `{"kind": "surface",
//! "genus": g}` (generators in the order a1, b1, a2, b2, …) or
//! `{"kind": "explicit", "relators": ["a b a' b'", …]}`. Entries are
//! rational strings. Unknown fields are rejected.

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::classify::Representation;
use crate::error::{Error, Result};
use crate::field::{format_rational, PrimeContext};
use crate::matrix::{Matrix2, Sl2Matrix};
use crate::words::{Presentation, PresentationKind};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum GroupSpec {
    Free { rank: usize },
    Surface { genus: usize },
    Explicit { relators: Vec<String> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepresentationFile {
    pub prime: u64,
    pub group: GroupSpec,
    pub generators: IndexMap<String, [[String; 2]; 2]>,
}

impl RepresentationFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| Error::Validation(format!("malformed representation file: {e}")))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data serializes");
        s.push('\n');
        s
    }

    /// Validate and build the representation.
    pub fn to_representation(&self) -> Result<Representation> {
        let ctx = PrimeContext::new(self.prime)?;
        let names: Vec<String> = self.generators.keys().cloned().collect();
        let presentation = match &self.group {
            GroupSpec::Free { rank } => {
                if *rank != names.len() {
                    return Err(Error::Validation(format!(
                        "free group of rank {rank} but {} generators given",
                        names.len()
                    )));
                }
                Presentation::free_named(names)
            }
            GroupSpec::Surface { genus } => Presentation::surface_named(*genus, names),
            GroupSpec::Explicit { relators } => {
                let free = Presentation::free_named(names.clone())?;
                let words = relators
                    .iter()
                    .map(|r| free.parse_word(r))
                    .collect::<Result<Vec<_>>>()?;
                Presentation::explicit(names, words)
            }
        }
        .map_err(|e| match e {
            Error::InvalidPresentation(m) => Error::Validation(m),
            other => other,
        })?;

        let mut assignment = Vec::with_capacity(self.generators.len());
        for (name, rows) in &self.generators {
            let m = Matrix2::parse(
                [[&rows[0][0], &rows[0][1]], [&rows[1][0], &rows[1][1]]],
                ctx,
            )
            .map_err(|e| Error::Validation(format!("generator {name}: {e}")))?;
            let g = Sl2Matrix::new(m).map_err(|e| match e {
                Error::DeterminantNotOne(d) => {
                    Error::Validation(format!("det({name}) ≠ 1 (got {d})"))
                }
                other => other,
            })?;
            assignment.push(g);
        }
        Representation::new(presentation, assignment, ctx)
    }

    pub fn from_representation(rep: &Representation) -> Self {
        let p = rep.presentation();
        let group = match p.kind() {
            PresentationKind::Free => GroupSpec::Free { rank: p.rank() },
            PresentationKind::Surface { genus } => GroupSpec::Surface { genus },
            PresentationKind::Explicit => GroupSpec::Explicit {
                relators: p.relators().iter().map(|r| p.format_word(r)).collect(),
            },
        };
        let generators = p
            .generators()
            .iter()
            .zip(rep.assignment())
            .map(|(name, g)| {
                let e = g.matrix().raw();
                let f = format_rational;
                (name.clone(), [[f(&e[0]), f(&e[1])], [f(&e[2]), f(&e[3])]])
            })
            .collect();
        Self {
            prime: rep.context().p(),
            group,
            generators,
        }
    }
}

pub fn parse_representation(text: &str) -> Result<Representation> {
    RepresentationFile::from_json(text)?.to_representation()
}

#[cfg(test)]
mod tests {
    use super::*;

    const SL2Z: &str = r#"{
        "prime": 3,
        "group": {"kind": "free", "rank": 2},
        "generators": {"a": [["1", "1"], ["0", "1"]], "b": [["1", "0"], ["1", "1"]]}
    }"#;

    #[test]
    fn parses_and_round_trips() {
        let rep = parse_representation(SL2Z).unwrap();
        assert_eq!(rep.rank(), 2);
        assert_eq!(rep.presentation().generators(), ["a", "b"]);
        let file = RepresentationFile::from_representation(&rep);
        let again = parse_representation(&file.to_json()).unwrap();
        assert_eq!(again, rep);
        assert_eq!(
            RepresentationFile::from_json(&file.to_json()).unwrap(),
            file
        );
    }

    #[test]
    fn validation_messages() {
        let det2 = SL2Z.replace(r#"[["1", "1"], ["0", "1"]]"#, r#"[["2", "0"], ["0", "1"]]"#);
        match parse_representation(&det2) {
            Err(Error::Validation(m)) => assert!(m.starts_with("det(a) ≠ 1"), "{m}"),
            other => panic!("{other:?}"),
        }
        let typo = SL2Z.replace("\"prime\"", "\"prim\"");
        assert!(matches!(
            parse_representation(&typo),
            Err(Error::Validation(_))
        ));
        let extra = SL2Z.replace("\"rank\": 2", "\"rank\": 2, \"genus\": 1");
        assert!(matches!(
            parse_representation(&extra),
            Err(Error::Validation(_))
        ));
        let composite = SL2Z.replace("\"prime\": 3", "\"prime\": 4");
        assert_eq!(
            parse_representation(&composite),
            Err(Error::PrimeNotPrime(4))
        );
        let float = SL2Z.replace(r#""1", "0"]"#, r#"1.0, "0"]"#);
        assert!(matches!(
            parse_representation(&float),
            Err(Error::Validation(_))
        ));
        let rank = SL2Z.replace("\"rank\": 2", "\"rank\": 3");
        assert!(matches!(
            parse_representation(&rank),
            Err(Error::Validation(_))
        ));
        let bad_name = SL2Z.replace("\"b\":", "\"B\":");
        assert!(matches!(
            parse_representation(&bad_name),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn relators_checked() {
        let text = r#"{
            "prime": 5,
            "group": {"kind": "explicit", "relators": ["a b a' b'"]},
            "generators": {"a": [["2", "0"], ["0", "1/2"]], "b": [["1", "1"], ["0", "1"]]}
        }"#;
        match parse_representation(text) {
            Err(Error::Validation(m)) => assert!(m.starts_with("relator ≠ identity"), "{m}"),
            other => panic!("{other:?}"),
        }
        let ok = text.replace(
            r#"[["1", "1"], ["0", "1"]]"#,
            r#"[["4", "0"], ["0", "1/4"]]"#,
        );
        let rep = parse_representation(&ok).unwrap();
        let back = RepresentationFile::from_representation(&rep);
        assert_eq!(
            back.group,
            GroupSpec::Explicit {
                relators: vec!["a b a' b'".into()]
            }
        );
    }

    #[test]
    fn surface_file() {
        // (A, B, B, A B) satisfies [A, B][B, A B] = 1.
        let text = r#"{
            "prime": 3,
            "group": {"kind": "surface", "genus": 2},
            "generators": {
                "a1": [["3", "0"], ["0", "1/3"]],
                "b1": [["1", "1"], ["0", "1"]],
                "a2": [["1", "1"], ["0", "1"]],
                "b2": [["3", "3"], ["0", "1/3"]]
            }
        }"#;
        let rep = parse_representation(text).unwrap();
        assert_eq!(rep.presentation().describe(), "surface(2)");
    }
}
