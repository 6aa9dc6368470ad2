//! Points and point sets as element labels.

use grpgeo::zariski::PointSet;
use grpgeo::{Elem, FiniteGroup};

pub fn point_labels(g: &FiniteGroup, p: &[Elem]) -> Vec<String> {
    p.iter().map(|&x| g.label(x).to_string()).collect()
}

pub fn set_labels(g: &FiniteGroup, u: &PointSet) -> Vec<Vec<String>> {
    u.iter().map(|p| point_labels(g, p)).collect()
}

/// `(a,b)`, or a bare label for one coordinate.
pub fn point_text(g: &FiniteGroup, p: &[Elem]) -> String {
    match p {
        [x] => g.label(*x).to_string(),
        _ => format!("({})", point_labels(g, p).join(",")),
    }
}

pub fn set_text(g: &FiniteGroup, u: &PointSet) -> String {
    let parts: Vec<String> = u.iter().map(|p| point_text(g, p)).collect();
    format!("{{{}}}", parts.join(", "))
}
