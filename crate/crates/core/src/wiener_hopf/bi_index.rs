//! Source/sink signature of the fixed point `0` on each half-line.
//!
//! A component is `+1` when `0` repels the half-line and `−1` when it
//! attracts it.

use crate::flow::{FlowModel, FlowVariant};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlowBiIndex {
    /// Left and right half-line.
    pub epsilon: [i8; 2],
}

const PROBE: f64 = 0.5;

pub fn flow_bi_index(model: &FlowModel) -> FlowBiIndex {
    let left = -(model.field(-PROBE).signum() as i8);
    let right = model.field(PROBE).signum() as i8;
    FlowBiIndex { epsilon: [left, right] }
}

/// `ε₁ + ε₂`; its absolute value is `2` for odd `k` and `0` for even `k`.
pub fn parity_invariant(idx: FlowBiIndex) -> i32 {
    idx.epsilon[0] as i32 + idx.epsilon[1] as i32
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BiIndexReport {
    pub k: u32,
    pub variant: FlowVariant,
    pub epsilon: [i8; 2],
    pub parity_invariant: i32,
}

pub fn bi_index_report(model: &FlowModel) -> BiIndexReport {
    let idx = flow_bi_index(model);
    BiIndexReport { k: model.k(), variant: model.variant(), epsilon: idx.epsilon, parity_invariant: parity_invariant(idx) }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parity() {
        for k in 1..=6 {
            let m = FlowModel::monomial(k).unwrap();
            let idx = flow_bi_index(&m);
            let expect = if k % 2 == 1 { [1, 1] } else { [-1, 1] };
            assert_eq!(idx.epsilon, expect);
            assert_eq!(parity_invariant(idx).abs(), 2 * (k as i32 % 2));
            assert_eq!(flow_bi_index(&m.reversed()).epsilon, [-expect[0], -expect[1]]);
            assert_eq!(flow_bi_index(&FlowModel::rescaled(k).unwrap()), idx);
        }
        assert_eq!(parity_invariant(FlowBiIndex { epsilon: [1, 1] }), 2);
        assert_eq!(parity_invariant(FlowBiIndex { epsilon: [-1, 1] }), 0);
    }
}
