//! Construction, certification and simulation of efficient CSS quantum codes
//! for fault-tolerant computation, together with an analytic overhead model.
//!
//! * [`gf2`]: bit-packed binary linear algebra and codeword enumeration.
//! * [`classical`]: BCH, punctured Reed–Muller and extended quadratic-residue codes.
//! * [`css`]: CSS codes from dual-containing classical codes, encoded Paulis.
//! * [`sim`]: exact sparse simulation of transversal gates on encoded blocks.
//! * [`gadgets`]: teleportation, switching, intra-block CNOT and Toffoli networks.
//! * [`overhead`]: failure probability, noise threshold and scale-up model.

pub mod classical;
pub mod css;
pub mod gadgets;
pub mod gf2;
pub mod overhead;
pub mod registry;
pub mod sim;
