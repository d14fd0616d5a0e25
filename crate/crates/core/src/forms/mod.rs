//! The algebra of meromorphic quasi-modular forms.

pub mod almost;
pub mod decompose;
pub mod modular;
pub mod quasi;
pub mod slash;

pub use almost::{maass_shimura, maass_shimura_iter, AlmostHolo};
pub use decompose::{decompose, depth_of_power_d, Decomposition};
pub use modular::ModularFn;
pub use quasi::QuasiForm;
pub use slash::{slash_check, Sl2};
