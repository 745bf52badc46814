//! Weighting files: a JSON list of `{"component": k, "position": i}` edges
//! of weight 1.

use serde::{Deserialize, Serialize};
use vlink_core::parity::Weighting;
use vlink_core::{Diagram, EdgeId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeRef {
    pub component: usize,
    pub position: usize,
}

impl From<EdgeId> for EdgeRef {
    fn from(e: EdgeId) -> Self {
        EdgeRef {
            component: e.component,
            position: e.position,
        }
    }
}

#[derive(Debug)]
pub enum WeightsError {
    Json(serde_json::Error),
    /// An edge outside the diagram.
    NoSuchEdge(EdgeRef),
}

impl std::fmt::Display for WeightsError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            WeightsError::Json(e) => write!(f, "malformed weighting file: {e}"),
            WeightsError::NoSuchEdge(e) => write!(
                f,
                "edge {}:{} is not in the diagram",
                e.component, e.position
            ),
        }
    }
}

impl std::error::Error for WeightsError {}

pub fn parse_weighting(d: &Diagram, text: &str) -> Result<Weighting, WeightsError> {
    let edges: Vec<EdgeRef> = serde_json::from_str(text).map_err(WeightsError::Json)?;
    if let Some(&bad) = edges
        .iter()
        .find(|e| !d.has_edge(EdgeId::new(e.component, e.position)))
    {
        return Err(WeightsError::NoSuchEdge(bad));
    }
    // listing an edge twice cancels it
    let mut w = Weighting::zero(d);
    for e in edges {
        w.flip(EdgeId::new(e.component, e.position));
    }
    Ok(w)
}

pub fn weighting_edges(w: &Weighting) -> Vec<EdgeRef> {
    w.support().into_iter().map(EdgeRef::from).collect()
}

pub fn write_weighting(w: &Weighting) -> String {
    serde_json::to_string(&weighting_edges(w)).expect("edge lists serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let d = vlink_core::parse("O1+U2+U1+O2+").unwrap();
        let w = parse_weighting(
            &d,
            r#"[{"component":0,"position":0},{"component":0,"position":2}]"#,
        )
        .unwrap();
        assert_eq!(w.support(), [EdgeId::new(0, 0), EdgeId::new(0, 2)]);
        assert_eq!(parse_weighting(&d, &write_weighting(&w)).unwrap(), w);
        assert!(parse_weighting(&d, "[]").unwrap().is_zero());
    }

    #[test]
    fn rejects_bad_files() {
        let d = vlink_core::parse("O1+U1+").unwrap();
        assert!(matches!(
            parse_weighting(&d, r#"[{"component":0,"position":2}]"#),
            Err(WeightsError::NoSuchEdge(_))
        ));
        assert!(matches!(
            parse_weighting(&d, "{"),
            Err(WeightsError::Json(_))
        ));
        assert!(matches!(
            parse_weighting(&d, r#"[{"component":0}]"#),
            Err(WeightsError::Json(_))
        ));
    }
}
