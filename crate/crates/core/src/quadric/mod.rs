//! Projective space `P(V)` with the exterior algebra of the annihilator
//! bundle, the quadric `ω = 0` inside it, and the actions of `W_n` and `DH_n`.

pub mod chart;
pub mod localized;
pub mod quotient;
pub mod verify;

pub use chart::{frame_section, gamma_pair, pointwise_annihilator_check, to_frame, FrameExpansion, GammaPair};
pub use localized::{d_localized, stalk_membership, LocalizedElement, ProjectivePoint, StalkMembership};
pub use quotient::{InducedDerivation, QuotientElement, QuotientRing};
pub use verify::{verify_dh_action, verify_closed_stalks, verify_w_action};
