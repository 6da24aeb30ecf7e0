//! Scalar and vector helpers shared by every module.
//!
//! Lattice points are plain `i64` vectors; every real-geometric quantity is an
//! arbitrary-precision rational.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;
pub type IntVec = Vec<i64>;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn to_rat_vec(v: &[i64]) -> Vec<Rat> {
    v.iter().map(|&x| rat(x)).collect()
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn dot_rat(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).fold(Rat::zero(), |acc, (x, y)| acc + x * y)
}

pub fn dot_rat_int(a: &[Rat], x: &[i64]) -> Rat {
    a.iter()
        .zip(x)
        .filter(|(_, &xi)| xi != 0)
        .fold(Rat::zero(), |acc, (ai, &xi)| acc + ai * BigInt::from(xi))
}

pub fn add(a: &[i64], b: &[i64]) -> IntVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[i64], b: &[i64]) -> IntVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(a: &[i64], k: i64) -> IntVec {
    a.iter().map(|x| x * k).collect()
}

pub fn is_zero(a: &[i64]) -> bool {
    a.iter().all(|&x| x == 0)
}

pub fn unit(dim: usize, i: usize) -> IntVec {
    let mut v = vec![0; dim];
    v[i] = 1;
    v
}

pub fn floor(r: &Rat) -> BigInt {
    r.floor().to_integer()
}

pub fn ceil(r: &Rat) -> BigInt {
    r.ceil().to_integer()
}

pub fn big_to_i64(b: &BigInt) -> Result<i64> {
    b.to_i64().ok_or(Error::Overflow)
}

/// Positive rescaling of a rational vector to a primitive integer vector.
/// Returns the integer vector and the (positive) factor applied.
pub fn primitive_scaling(v: &[Rat]) -> (Vec<BigInt>, Rat) {
    let mut lcm = BigInt::one();
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return (ints, Rat::one());
    }
    let prim = ints.iter().map(|x| x / &g).collect();
    (prim, Rat::new(lcm, g))
}

/// Primitive integer vector in the direction of `v` (positive multiple).
pub fn primitive_int(v: &[Rat]) -> Result<IntVec> {
    primitive_scaling(v).0.iter().map(big_to_i64).collect()
}

pub fn primitive_i64(v: &[i64]) -> IntVec {
    let g = v.iter().fold(0i64, |g, &x| g.gcd(&x));
    if g == 0 {
        v.to_vec()
    } else {
        v.iter().map(|x| x / g).collect()
    }
}

/// Format a rational as a decimal-free `p/q` string.
pub fn format_rat(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parse `p/q` or a bare integer `p`.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let bad = || Error::ParseRational(s.to_string());
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rat::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Rat::from_integer(n))
        }
    }
}

/// Lexicographic sign of the first nonzero entry.
pub fn leading_sign(v: &[Rat]) -> i32 {
    for x in v {
        if x.is_positive() {
            return 1;
        }
        if x.is_negative() {
            return -1;
        }
    }
    0
}

/// Enumerate all `k`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    }
    out
}
