//! Polycyclic group arithmetic, group-based key exchange, signature,
//! authentication and secret-sharing protocols, and attacks against them.

pub mod attacks;
pub mod bench;
pub mod int;
pub mod linalg;
pub mod oracles;
pub mod pc;
pub mod platform;
pub mod protocols;
pub mod rng;
pub mod smallcanc;

pub use int::Int;
pub use pc::{GroupElement, PcError, PcPresentation, Word};
pub use platform::PlatformGroup;
pub use rng::SeededRng;
