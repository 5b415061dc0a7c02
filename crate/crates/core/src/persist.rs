//! Oracle files: a header line `STEINER-SENTRY-ORACLE v<version>` followed
//! by the oracle as JSON. Output is byte-identical for identical inputs.

use crate::error::PersistError;
use crate::oracle::FullOracle;

pub const MAGIC: &str = "STEINER-SENTRY-ORACLE";
pub const VERSION: u32 = 1;

pub fn save_oracle(o: &FullOracle) -> String {
    let body = serde_json::to_string(o).expect("oracle serializes");
    format!("{MAGIC} v{VERSION}\n{body}\n")
}

pub fn load_oracle(text: &str) -> Result<FullOracle, PersistError> {
    let (header, body) = text.split_once('\n').unwrap_or((text, ""));
    let version = header
        .strip_prefix(MAGIC)
        .and_then(|rest| rest.strip_prefix(" v"))
        .ok_or_else(|| PersistError::BadMagic {
            expected: format!("{MAGIC} v{VERSION}"),
        })?;
    if version.trim() != VERSION.to_string() {
        return Err(PersistError::Version {
            found: version.trim().to_string(),
            expected: VERSION,
        });
    }
    let o: FullOracle = serde_json::from_str(body)?;
    let (n, m) = (o.graph().n(), o.graph().m());
    if o.gomory_hu().n() != n {
        return Err(PersistError::Inconsistent(format!(
            "cut tree has {} vertices, graph has {n}",
            o.gomory_hu().n()
        )));
    }
    if !(0..m).all(|id| o.cap_tree().covers(id)) {
        return Err(PersistError::Inconsistent(
            "capacity tree does not cover every edge".into(),
        ));
    }
    Ok(o)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    fn oracle() -> FullOracle {
        let g = Graph::new(4, [(0, 1, 1), (1, 2, 1), (2, 3, 1)], [0, 3]).unwrap();
        FullOracle::build(&g).unwrap()
    }

    #[test]
    fn round_trip() {
        let o = oracle();
        let text = save_oracle(&o);
        assert!(text.starts_with("STEINER-SENTRY-ORACLE v1\n"));
        let back = load_oracle(&text).unwrap();
        assert_eq!(back, o);
        assert_eq!(save_oracle(&back), text);
        assert_eq!(back.cut_query(1, 2, 1).unwrap(), o.cut_query(1, 2, 1).unwrap());
    }

    #[test]
    fn version_mismatch_fails() {
        let text = save_oracle(&oracle()).replacen("v1", "v2", 1);
        assert!(matches!(
            load_oracle(&text),
            Err(PersistError::Version { ref found, expected: 1 }) if found == "2"
        ));
    }

    #[test]
    fn bad_header_and_payload() {
        assert!(matches!(
            load_oracle("p 3 2\n"),
            Err(PersistError::BadMagic { .. })
        ));
        assert!(matches!(
            load_oracle("STEINER-SENTRY-ORACLE v1\n{"),
            Err(PersistError::Payload(_))
        ));
    }
}
