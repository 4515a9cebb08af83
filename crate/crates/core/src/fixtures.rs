//! The presentations shipped in `fixtures/`.

use crate::dga::{parse_presentation, DgaPresentation};

pub const UNKNOT: &str = include_str!("../../../fixtures/unknot.leg");
pub const TREFOIL: &str = include_str!("../../../fixtures/trefoil.leg");

pub fn unknot() -> DgaPresentation {
    parse_presentation(UNKNOT.as_bytes()).expect("unknot fixture parses")
}

pub fn trefoil() -> DgaPresentation {
    parse_presentation(TREFOIL.as_bytes()).expect("trefoil fixture parses")
}
