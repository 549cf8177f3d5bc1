//! Digit sequences over ω: the pairing function, ultimately periodic
//! streams, lazy stream views, the tensor/projection coding and the
//! Baire metric.

use alloc::boxed::Box;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

/// A natural number played as a move.
pub type Digit = u64;

/// A finite sequence of digits.
pub type FinSeq = Vec<Digit>;

/// `⟨n, m⟩ = 2^n (2m + 1) − 1`.
///
/// Panics if the value does not fit in a `u64`; see [`checked_pair`].
pub fn pair(n: u64, m: u64) -> u64 {
    checked_pair(n, m).expect("pair overflows u64")
}

pub fn checked_pair(n: u64, m: u64) -> Option<u64> {
    if n >= 64 {
        return None;
    }
    let odd = m.checked_mul(2)?.checked_add(1)?;
    let shifted = odd.checked_mul(1u64 << n)?;
    Some(shifted - 1)
}

/// Inverse of [`pair`]: `n` is the 2-adic valuation of `k + 1`.
pub fn unpair(k: u64) -> (u64, u64) {
    let k1 = k as u128 + 1;
    let n = k1.trailing_zeros() as u64;
    let m = (k1 >> (n + 1)) as u64;
    (n, m)
}

/// Row index of position `k` in the tensor coding.
pub fn row_of(k: u64) -> u64 {
    unpair(k).0
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

fn pow2_mod(n: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let mut result: u128 = 1;
    let mut base: u128 = 2;
    let mut e = n;
    let m = modulus as u128;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    result as u64
}

/// An infinite sequence `prefix ⌢ period ⌢ period ⌢ …`, kept in canonical
/// form (primitive period, then shortest prefix).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UpStream {
    prefix: FinSeq,
    period: FinSeq,
}

impl fmt::Debug for UpStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}({:?})^ω", self.prefix, self.period)
    }
}

impl UpStream {
    /// Builds the stream; returns `None` when `period` is empty.
    pub fn new(prefix: FinSeq, period: FinSeq) -> Option<Self> {
        if period.is_empty() {
            return None;
        }
        let mut s = UpStream { prefix, period };
        s.canonicalize();
        Some(s)
    }

    pub fn periodic(period: FinSeq) -> Option<Self> {
        Self::new(Vec::new(), period)
    }

    pub fn constant(d: Digit) -> Self {
        UpStream {
            prefix: Vec::new(),
            period: alloc::vec![d],
        }
    }

    pub fn zeros() -> Self {
        Self::constant(0)
    }

    pub fn prefix(&self) -> &[Digit] {
        &self.prefix
    }

    pub fn period(&self) -> &[Digit] {
        &self.period
    }

    /// `|prefix| + |period|` of the canonical form.
    pub fn size(&self) -> usize {
        self.prefix.len() + self.period.len()
    }

    fn canonicalize(&mut self) {
        let len = self.period.len();
        for d in 1..=len {
            if len.is_multiple_of(d) && (d..len).all(|i| self.period[i] == self.period[i - d]) {
                self.period.truncate(d);
                break;
            }
        }
        while let Some(&last) = self.prefix.last() {
            if last != *self.period.last().unwrap() {
                break;
            }
            self.prefix.pop();
            self.period.rotate_right(1);
        }
    }

    pub fn at(&self, i: u64) -> Digit {
        let p = self.prefix.len() as u64;
        if i < p {
            self.prefix[i as usize]
        } else {
            let l = self.period.len() as u64;
            self.period[((i - p) % l) as usize]
        }
    }

    pub fn take(&self, n: usize) -> FinSeq {
        (0..n as u64).map(|i| self.at(i)).collect()
    }

    /// `s ⌢ self`.
    pub fn prepend(&self, s: &[Digit]) -> Self {
        let mut prefix = s.to_vec();
        prefix.extend_from_slice(&self.prefix);
        Self::new(prefix, self.period.clone()).unwrap()
    }

    /// Drops the first `n` digits.
    pub fn shift(&self, n: u64) -> Self {
        let p = self.prefix.len() as u64;
        if n <= p {
            Self::new(self.prefix[n as usize..].to_vec(), self.period.clone()).unwrap()
        } else {
            let mut period = self.period.clone();
            let r = ((n - p) % period.len() as u64) as usize;
            period.rotate_left(r);
            Self::new(Vec::new(), period).unwrap()
        }
    }

    /// `πₙ(x)(m) = x(⟨n, m⟩)`.
    pub fn project(&self, n: u64) -> Self {
        let p = self.prefix.len() as u64;
        let l = self.period.len() as u64;
        // start = 2^n − 1, step = 2^(n+1)
        let small = n < 63 && (1u64 << n) - 1 < p;
        let mut prefix = Vec::new();
        let mut m0: u64 = 0;
        if small {
            let start = (1u64 << n) - 1;
            let step = 1u64 << (n + 1);
            let mut idx = start;
            while idx < p {
                prefix.push(self.prefix[idx as usize]);
                idx += step;
                m0 += 1;
            }
        }
        // offset into the period of the first sampled index ≥ p
        let pow = pow2_mod(n, l);
        let step_mod = (2 * pow as u128 % l as u128) as u64;
        let start_mod = (pow + l - 1 % l) % l;
        let base = (start_mod as u128 + (m0 as u128 % l as u128) * step_mod as u128) % l as u128;
        let base = ((base + l as u128 - (p % l) as u128) % l as u128) as u64;
        let period = (0..l)
            .map(|j| {
                let off = (base as u128 + j as u128 * step_mod as u128) % l as u128;
                self.period[off as usize]
            })
            .collect();
        Self::new(prefix, period).unwrap()
    }

    /// Index of the first disagreement, `None` when the streams are equal.
    pub fn lcp(&self, other: &UpStream) -> Option<u64> {
        if self == other {
            return None;
        }
        let bound = self.prefix.len().max(other.prefix.len()) as u64
            + lcm(self.period.len() as u64, other.period.len() as u64);
        (0..bound).find(|&i| self.at(i) != other.at(i))
    }

    pub fn distance(&self, other: &UpStream) -> DyadicDistance {
        match self.lcp(other) {
            None => DyadicDistance::Zero,
            Some(e) => DyadicDistance::Pow(e),
        }
    }
}

/// `0` or `2^(−n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DyadicDistance {
    Zero,
    /// `2^(−exp)`
    Pow(u64),
}

impl DyadicDistance {
    /// `self ≤ 2^k · other`, exactly.
    pub fn le_scaled(self, other: DyadicDistance, k: u64) -> bool {
        match (self, other) {
            (DyadicDistance::Zero, _) => true,
            (_, DyadicDistance::Zero) => false,
            (DyadicDistance::Pow(a), DyadicDistance::Pow(b)) => a as u128 + k as u128 >= b as u128,
        }
    }
}

impl Ord for DyadicDistance {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (DyadicDistance::Zero, DyadicDistance::Zero) => Ordering::Equal,
            (DyadicDistance::Zero, _) => Ordering::Less,
            (_, DyadicDistance::Zero) => Ordering::Greater,
            (DyadicDistance::Pow(a), DyadicDistance::Pow(b)) => b.cmp(a),
        }
    }
}

impl PartialOrd for DyadicDistance {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All projections `πₙ(x)` of an ultimately periodic stream, as a finite
/// table plus a cycle: for `n ≥ cycle_start`, entry `n` equals entry
/// `cycle_start + (n − cycle_start) mod cycle_len`.
#[derive(Clone, Debug)]
pub struct ProjectionSpectrum {
    streams: Vec<UpStream>,
    index: Vec<usize>,
    cycle_start: u64,
    cycle_len: u64,
}

impl ProjectionSpectrum {
    pub fn of(x: &UpStream) -> Self {
        let p = x.prefix.len() as u64;
        let l = x.period.len() as u64;
        let mut n0 = 0u64;
        while n0 < 64 && (1u64 << n0) - 1 < p {
            n0 += 1;
        }
        // 2^n mod l is eventually periodic; find the first repeat from n0 on.
        let mut seen: Vec<(u64, u64)> = Vec::new();
        let mut n = n0;
        let mut r = pow2_mod(n0, l);
        let (cycle_start, cycle_end) = loop {
            if let Some(&(first, _)) = seen.iter().find(|&&(_, v)| v == r) {
                break (first, n);
            }
            seen.push((n, r));
            r = (2 * r as u128 % l.max(1) as u128) as u64;
            n += 1;
        };
        let mut streams: Vec<UpStream> = Vec::new();
        let mut index = Vec::new();
        for n in 0..cycle_end {
            let s = x.project(n);
            let i = match streams.iter().position(|t| *t == s) {
                Some(i) => i,
                None => {
                    streams.push(s);
                    streams.len() - 1
                }
            };
            index.push(i);
        }
        ProjectionSpectrum {
            streams,
            index,
            cycle_start,
            cycle_len: cycle_end - cycle_start,
        }
    }

    pub fn index_of(&self, n: u64) -> usize {
        let slot = if n < self.cycle_start + self.cycle_len {
            n
        } else {
            self.cycle_start + (n - self.cycle_start) % self.cycle_len
        };
        self.index[slot as usize]
    }

    pub fn entry(&self, n: u64) -> &UpStream {
        &self.streams[self.index_of(n)]
    }

    /// The distinct projections.
    pub fn distinct(&self) -> &[UpStream] {
        &self.streams
    }

    pub fn cycle_start(&self) -> u64 {
        self.cycle_start
    }

    pub fn cycle_len(&self) -> u64 {
        self.cycle_len
    }
}

/// A lazily generated infinite sequence. Reads are repeatable.
pub trait StreamView {
    fn digit(&self, i: u64) -> Digit;

    fn take(&self, n: usize) -> FinSeq {
        (0..n as u64).map(|i| self.digit(i)).collect()
    }
}

impl StreamView for UpStream {
    fn digit(&self, i: u64) -> Digit {
        self.at(i)
    }
}

impl<T: StreamView + ?Sized> StreamView for &T {
    fn digit(&self, i: u64) -> Digit {
        (**self).digit(i)
    }
}

impl<T: StreamView + ?Sized> StreamView for Box<T> {
    fn digit(&self, i: u64) -> Digit {
        (**self).digit(i)
    }
}

/// A stream given by a digit function.
pub struct FnView<F>(pub F);

impl<F: Fn(u64) -> Digit> StreamView for FnView<F> {
    fn digit(&self, i: u64) -> Digit {
        (self.0)(i)
    }
}

/// `⊗ₙ xₙ`: digit `k` is digit `μ(k)` of row `ν(k)`. Rows past the explicit
/// list read from the tail.
pub struct TensorView<'a> {
    rows: Vec<Box<dyn StreamView + 'a>>,
    tail_row: Box<dyn Fn(u64, u64) -> Digit + 'a>,
}

impl<'a> TensorView<'a> {
    /// Explicit rows, then `tail` on every remaining row.
    pub fn new(rows: Vec<Box<dyn StreamView + 'a>>, tail: impl StreamView + 'a) -> Self {
        TensorView {
            rows,
            tail_row: Box::new(move |_, m| tail.digit(m)),
        }
    }

    /// Every row given by a function of `(row, index)`.
    pub fn from_fn(f: impl Fn(u64, u64) -> Digit + 'a) -> Self {
        TensorView {
            rows: Vec::new(),
            tail_row: Box::new(f),
        }
    }
}

impl StreamView for TensorView<'_> {
    fn digit(&self, k: u64) -> Digit {
        let (n, m) = unpair(k);
        match self.rows.get(n as usize) {
            Some(row) => row.digit(m),
            None => (self.tail_row)(n, m),
        }
    }
}

/// `πₙ` applied to a view.
pub struct ProjectedView<V> {
    pub inner: V,
    pub row: u64,
}

impl<V: StreamView> StreamView for ProjectedView<V> {
    fn digit(&self, m: u64) -> Digit {
        self.inner.digit(pair(self.row, m))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn brute_unpair(k: u64) -> (u64, u64) {
        for n in 0..=8 {
            for m in 0..=8 {
                if (1u64 << n) * (2 * m + 1) - 1 == k {
                    return (n, m);
                }
            }
        }
        panic!("not found")
    }

    #[test]
    fn pairing_examples() {
        assert_eq!(pair(0, 0), 0);
        assert_eq!(pair(1, 0), 1);
        assert_eq!(pair(0, 1), 2);
        assert_eq!(unpair(0), (0, 0));
        assert_eq!(unpair(5), brute_unpair(5));
        assert_eq!(unpair(5), (1, 1));
        assert_eq!(unpair(7), brute_unpair(7));
        assert_eq!(unpair(7), (3, 0));
        assert_eq!(unpair(u64::MAX), (64, 0));
        assert_eq!(checked_pair(64, 0), None);
    }

    #[test]
    fn at_examples() {
        let z = UpStream::zeros();
        assert_eq!(z.at(7), 0);
        let x = UpStream::new(vec![3], vec![1, 2]).unwrap();
        assert_eq!(x.at(0), 3);
        // unrolled: 3 1 2 1 2 1 2 1
        assert_eq!(x.take(8), vec![3, 1, 2, 1, 2, 1, 2, 1]);
        assert_eq!(x.at(4), 2);
    }

    #[test]
    fn canonical_forms() {
        let a = UpStream::new(vec![0, 1], vec![0, 1]).unwrap();
        let b = UpStream::periodic(vec![0, 1, 0, 1]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.prefix(), &[] as &[u64]);
        let c = UpStream::new(vec![5, 2, 1], vec![2, 1]).unwrap();
        assert_eq!(c.prefix(), &[5]);
        assert_eq!(c.period(), &[2, 1]);
        assert!(UpStream::new(vec![1], vec![]).is_none());
    }

    #[test]
    fn projection_examples() {
        let z = UpStream::zeros();
        for n in 0..20 {
            assert_eq!(z.project(n), z);
        }
        let x = UpStream::periodic(vec![0, 1]).unwrap();
        // positions 1, 5, 9, ... are odd, so every digit is 1
        let unrolled = x.take(16);
        assert_eq!(unrolled[1], 1);
        assert_eq!(unrolled[5], 1);
        assert_eq!(unrolled[9], 1);
        assert_eq!(x.project(1), UpStream::constant(1));
        // huge rows stay well-defined
        let y = UpStream::new(vec![4, 4, 4], vec![1, 2, 3]).unwrap();
        assert_eq!(y.project(200).at(3), y.project(200).at(3));
    }

    #[test]
    fn projection_of_tensor_recovers_row() {
        let a = UpStream::periodic(vec![1, 2, 3]).unwrap();
        let b = UpStream::constant(9);
        let t = TensorView::new(
            vec![Box::new(a.clone()), Box::new(b.clone())],
            UpStream::zeros(),
        );
        let p0 = ProjectedView { inner: &t, row: 0 };
        let p1 = ProjectedView { inner: &t, row: 1 };
        assert_eq!(p0.take(40), a.take(40));
        assert_eq!(p1.take(40), b.take(40));
    }

    #[test]
    fn tensor_row_zero_marks_even_positions() {
        let t = TensorView::new(vec![Box::new(UpStream::constant(1))], UpStream::zeros());
        let digits = t.take(16);
        for (k, d) in digits.iter().enumerate() {
            let expect = if (0..8).any(|m| pair(0, m) == k as u64) {
                1
            } else {
                0
            };
            assert_eq!(*d, expect, "position {k}");
            assert_eq!(*d == 1, k % 2 == 0);
        }
    }

    #[test]
    fn spectrum_small_cases() {
        let z = UpStream::zeros();
        let s = ProjectionSpectrum::of(&z);
        assert_eq!(s.distinct().len(), 1);
        let x = UpStream::periodic(vec![0, 1]).unwrap();
        let s = ProjectionSpectrum::of(&x);
        for n in 0..=12 {
            assert_eq!(*s.entry(n), x.project(n));
        }
        let y = UpStream::new(vec![9], vec![0]).unwrap();
        let s = ProjectionSpectrum::of(&y);
        for n in 1..=12 {
            assert_eq!(*s.entry(n), UpStream::zeros());
            assert_eq!(y.project(n), UpStream::zeros());
        }
    }

    #[test]
    fn distances() {
        let x = UpStream::periodic(vec![0, 1]).unwrap();
        let y = UpStream::new(vec![0, 1], vec![0, 1]).unwrap();
        assert_eq!(x.distance(&y), DyadicDistance::Zero);
        let u = UpStream::constant(1);
        assert_eq!(x.distance(&u), DyadicDistance::Pow(0));
        let w = UpStream::new(vec![0, 1, 0], vec![7]).unwrap();
        assert_eq!(x.lcp(&w), Some(3));
        assert!(DyadicDistance::Pow(3).le_scaled(DyadicDistance::Pow(5), 2));
        assert!(!DyadicDistance::Pow(2).le_scaled(DyadicDistance::Pow(5), 2));
        assert!(DyadicDistance::Zero < DyadicDistance::Pow(70));
        assert!(DyadicDistance::Pow(1) < DyadicDistance::Pow(0));
    }
}
