//! Reduction games on Baire space.
//!
//! Player I enumerates a real digit by digit; player II answers with digits
//! or special moves (pass, erase, backtrack, row moves) subject to a rule
//! set, and an interpretation turns II's play into an output real. This
//! crate evaluates such games exactly on ultimately periodic inputs against
//! finite-state strategies, and to a fixed depth everywhere else.

#![no_std]

extern crate alloc;

pub mod composite;
pub mod degree;
pub mod demos;
pub mod error;
pub mod game;
pub mod moves;
pub mod omega;
pub mod strategy;
pub mod streams;

pub use error::{Error, Result};
pub use moves::Move;
pub use streams::{
    pair, unpair, Digit, DyadicDistance, FinSeq, ProjectionSpectrum, StreamView, UpStream,
};
