//! Network-coding gap instances built from locally decodable codes, together
//! with linear coding simulation and exact multicommodity packing bounds.

pub mod codes;
pub mod codingsim;
pub mod field;
pub mod graph;
pub mod instance;
pub mod linalg;
pub mod lp;
pub mod mvfamily;
pub mod packing;
pub mod rational;
pub mod rdldc;
pub mod seed;
pub mod steiner;

pub use codes::{CodeDescriptor, CodeError, CodeSpec, LinearLdc, QueryPlan};
pub use codingsim::CodingSolution;
pub use field::{FieldCtx, FieldElem, FieldError};
pub use instance::{DualCertificate, GapInstance, GapParams};
pub use mvfamily::{MatchingVectorFamily, MvError};
pub use packing::{PackingInstance, PackingResult, Tau};
pub use rational::Rational;
pub use rdldc::HypergraphMatchingFamily;
pub use seed::SeedSplitter;
