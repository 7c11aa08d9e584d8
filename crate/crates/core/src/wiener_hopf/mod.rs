//! Operator side: Fourier and Cayley transforms, Toeplitz finite sections,
//! winding-number indices, flow bi-indices and the non-preservation
//! computation.

mod bi_index;
mod cayley;
mod line;
mod nonpreservation;
mod symbol;
mod toeplitz;

pub use bi_index::{bi_index_report, flow_bi_index, parity_invariant, BiIndexReport, FlowBiIndex};
pub use cayley::{cayley, cayley_basis_image, cayley_gram, gram_defect};
pub use line::{fourier_transform_line, LineFunction};
pub use nonpreservation::{direct_norms, nonpreservation_demo, DemoRow, Diffeo, NonPreservationReport, NonPreservationSetup};
pub use symbol::{
    cayley_side_symbol, generator_loop, index_report, line_nodes, IndexReport, LoopDomain, SymbolLoop, Winding,
    DEFAULT_MAX_RESIDUAL, FREDHOLM_FLOOR,
};
pub use toeplitz::{circle_fourier_coefficients, finite_section_kernel_counts, toeplitz_finite_section, FiniteSection};
