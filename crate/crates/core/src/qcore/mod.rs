//! States, channels, measurements and the entropic functionals built on them.

mod channel;
mod energy;
mod ensemble;
mod entropy;
mod state;

pub use channel::{completeness_defect, KrausChannel, Povm, CHANNEL_TOL};
pub use energy::{ergotropy, passify, Hamiltonian};
pub use ensemble::{average_output, CqEnsemble, EncodingEnsemble};
pub use entropy::{
    binary_entropy, holevo_chi, relative_entropy, shannon_entropy, von_neumann_entropy,
    RelativeEntropy, SUPPORT_EIGEN_FLOOR, SUPPORT_WEIGHT_TOL,
};
pub use state::{DensityMatrix, STATE_TOL};

pub(crate) use state::check_dims;
