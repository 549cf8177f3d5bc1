//! Player II's move alphabet.

use core::fmt;

use num_bigint::BigUint;

use crate::streams::Digit;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sym {
    Pass,
    Erase,
    Bt,
}

/// What a multitape move does on its chosen row.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RowInner {
    Pass,
    Nat(Digit),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Move {
    Nat(Digit),
    Sym(Sym),
    Row {
        row: u64,
        inner: RowInner,
    },
    /// An unbounded natural number; used where II's digit encodes a whole
    /// tuple and may exceed 64 bits.
    Coded(BigUint),
}

impl Move {
    pub const PASS: Move = Move::Sym(Sym::Pass);
    pub const ERASE: Move = Move::Sym(Sym::Erase);
    pub const BT: Move = Move::Sym(Sym::Bt);

    pub fn is_pass(&self) -> bool {
        matches!(self, Move::Sym(Sym::Pass))
    }

    pub fn nat(&self) -> Option<Digit> {
        match self {
            Move::Nat(d) => Some(*d),
            _ => None,
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::Nat(d) => write!(f, "{d}"),
            Move::Sym(Sym::Pass) => f.write_str("P"),
            Move::Sym(Sym::Erase) => f.write_str("E"),
            Move::Sym(Sym::Bt) => f.write_str("BT"),
            Move::Row {
                row,
                inner: RowInner::Pass,
            } => write!(f, "r{row}:P"),
            Move::Row {
                row,
                inner: RowInner::Nat(d),
            } => write!(f, "r{row}:{d}"),
            Move::Coded(c) => write!(f, "#{c}"),
        }
    }
}
