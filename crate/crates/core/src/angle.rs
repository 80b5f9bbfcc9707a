//! Exact arithmetic on rational angle systems.
//!
//! An [`AngleSystem`] stores the angles `q_i * pi / k` of a rational polygon as
//! integer numerators over a common denominator. Everything here works on
//! integers and reduced fractions; no floating point is involved.

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A reduced fraction. Fractional parts `{l q_i / k}` always have a
/// denominator dividing `k`.
pub type ExactFraction = Ratio<i64>;

/// Largest admissible common denominator. Keeps `l * q_i` well inside `u64`.
pub const MAX_MODULUS: u64 = 1 << 31;

/// How a common factor of the numerators is treated on construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GcdPolicy {
    /// Keep the numerators as given; the system may be unnormalized.
    #[default]
    Keep,
    /// Divide out the common factor.
    Reduce,
    /// Reject input whose numerators share a factor.
    Strict,
}

/// Angles `q_i * pi / k` of a rational `n`-gon with `sum q_i = (n - 2) k`.
///
/// Numerators are kept sorted ascending. The value is immutable once built.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AngleSystem {
    q: Vec<u64>,
    k: u64,
}

impl AngleSystem {
    pub fn new(q: &[i64], policy: GcdPolicy) -> Result<Self> {
        if q.len() < 3 {
            return Err(Error::TooFewAngles(q.len()));
        }
        if let Some(&bad) = q.iter().find(|&&x| x < 1) {
            return Err(Error::NonPositiveAngle(bad));
        }
        let n = q.len() as i64;
        let sum = q
            .iter()
            .try_fold(0i64, |acc, &x| acc.checked_add(x))
            .ok_or(Error::ModulusTooLarge(i64::MAX))?;
        if sum % (n - 2) != 0 {
            return Err(Error::AngleSumNotDivisible {
                sum,
                divisor: n - 2,
            });
        }
        let k = sum / (n - 2);
        if k as u64 > MAX_MODULUS {
            return Err(Error::ModulusTooLarge(k));
        }
        if let Some(&big) = q.iter().find(|&&x| x >= k) {
            return Err(Error::AngleTooLarge { q: big, k });
        }

        let mut q: Vec<u64> = q.iter().map(|&x| x as u64).collect();
        q.sort_unstable();
        let mut k = k as u64;

        let g = q.iter().fold(k, |acc, &x| acc.gcd(&x));
        if g > 1 {
            match policy {
                GcdPolicy::Keep => {}
                GcdPolicy::Reduce => {
                    q.iter_mut().for_each(|x| *x /= g);
                    k /= g;
                }
                GcdPolicy::Strict => return Err(Error::NotNormalized { q, gcd: g }),
            }
        }
        Ok(AngleSystem { q, k })
    }

    /// Triangle with angles `q1, q2, q3` over `k = q1 + q2 + q3`.
    pub fn triangle(q1: i64, q2: i64, q3: i64, policy: GcdPolicy) -> Result<Self> {
        Self::new(&[q1, q2, q3], policy)
    }

    pub fn q(&self) -> &[u64] {
        &self.q
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn n(&self) -> usize {
        self.q.len()
    }

    /// `gcd(q_1, ..., q_n, k) == 1`.
    pub fn is_normalized(&self) -> bool {
        self.q.iter().fold(self.k, |acc, &x| acc.gcd(&x)) == 1
    }

    pub fn is_triangle(&self) -> bool {
        self.q.len() == 3
    }

    /// The same angles written with the least common denominator.
    pub fn reduced(&self) -> AngleSystem {
        let g = self.q.iter().fold(self.k, |acc, &x| acc.gcd(&x));
        AngleSystem {
            q: self.q.iter().map(|x| x / g).collect(),
            k: self.k / g,
        }
    }

    pub(crate) fn require_triangle(&self) -> Result<()> {
        if self.is_triangle() {
            Ok(())
        } else {
            Err(Error::NotTriangle(self.n()))
        }
    }

    pub(crate) fn require_normalized(&self) -> Result<()> {
        if self.is_normalized() {
            Ok(())
        } else {
            let gcd = self.q.iter().fold(self.k, |acc, &x| acc.gcd(&x));
            Err(Error::NotNormalized {
                q: self.q.clone(),
                gcd,
            })
        }
    }

    /// Canonical residue of `ell` in `0..k`.
    pub fn residue(&self, ell: i64) -> u64 {
        reduce_mod(ell, self.k)
    }

    /// Numerator of `t_i(ell)` over `k`, i.e. `(ell * q_i) mod k`.
    pub(crate) fn t_numerator(&self, i: usize, ell: i64) -> u64 {
        (self.residue(ell) * self.q[i]) % self.k
    }
}

impl fmt::Display for AngleSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.q.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ";{})", self.k)
    }
}

pub fn reduce_mod(x: i64, k: u64) -> u64 {
    x.rem_euclid(k as i64) as u64
}

/// `t_i(ell) = {ell q_i / k}`.
///
/// Panics if `i` is out of range.
pub fn t_component(sys: &AngleSystem, i: usize, ell: i64) -> ExactFraction {
    Ratio::new(sys.t_numerator(i, ell) as i64, sys.k() as i64)
}

/// `t(ell) = sum_i {ell q_i / k}`, always an integer.
pub fn t_total(sys: &AngleSystem, ell: i64) -> u64 {
    let numer: u64 = (0..sys.n()).map(|i| sys.t_numerator(i, ell)).sum();
    // sum_i ell q_i / k = (n - 2) ell, so the fractional parts sum to an integer.
    assert!(
        numer.is_multiple_of(sys.k()),
        "fractional parts of {sys} at {ell} sum to {numer}/{}",
        sys.k()
    );
    numer / sys.k()
}

/// Number of `i` with `k` not dividing `ell * q_i`; equals `t(ell) + t(-ell)`.
pub fn nonvanishing_count(sys: &AngleSystem, ell: i64) -> u64 {
    (0..sys.n())
        .filter(|&i| sys.t_numerator(i, ell) != 0)
        .count() as u64
}

/// A set of residues modulo `k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ResidueSet {
    modulus: u64,
    members: BTreeSet<u64>,
}

impl ResidueSet {
    pub fn new(modulus: u64) -> Self {
        ResidueSet {
            modulus,
            members: BTreeSet::new(),
        }
    }

    /// Builds a set from arbitrary integers, reducing each modulo `modulus`.
    pub fn from_residues<I: IntoIterator<Item = i64>>(modulus: u64, it: I) -> Self {
        ResidueSet {
            modulus,
            members: it.into_iter().map(|x| reduce_mod(x, modulus)).collect(),
        }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn insert(&mut self, x: i64) -> bool {
        self.members.insert(reduce_mod(x, self.modulus))
    }

    pub fn extend<I: IntoIterator<Item = u64>>(&mut self, it: I) {
        let m = self.modulus;
        self.members.extend(it.into_iter().map(|x| x % m));
    }

    pub fn contains(&self, x: i64) -> bool {
        self.members.contains(&reduce_mod(x, self.modulus))
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.members.iter().copied()
    }

    pub fn to_vec(&self) -> Vec<u64> {
        self.iter().collect()
    }

    /// True when every member is coprime to the modulus.
    pub fn is_unit_subset(&self) -> bool {
        self.members.iter().all(|x| x.gcd(&self.modulus) == 1)
    }

    pub fn is_subset(&self, other: &ResidueSet) -> bool {
        self.modulus == other.modulus && self.members.is_subset(&other.members)
    }
}

/// `(Z/k)^*`.
pub fn unit_group(k: u64) -> Result<ResidueSet> {
    if k < 2 {
        return Err(Error::ModulusTooSmall(k));
    }
    let mut set = ResidueSet::new(k);
    set.extend((1..k).filter(|a| a.gcd(&k) == 1));
    Ok(set)
}

/// Smallest multiplicatively closed subset of `(Z/k)^*` containing `gens`
/// and 1.
///
/// In a finite group this is the subgroup generated by `gens`, reached here
/// by a breadth-first walk that multiplies by one generator at a time.
pub fn multiplicative_closure(gens: &ResidueSet) -> Result<ResidueSet> {
    let k = gens.modulus();
    if let Some(bad) = gens.iter().find(|x| x.gcd(&k) != 1) {
        return Err(Error::NotAUnit {
            residue: bad,
            modulus: k,
        });
    }
    let one = 1 % k;
    let mut seen = vec![false; k as usize];
    seen[one as usize] = true;
    let mut frontier = vec![one];
    let gen_list = gens.to_vec();
    while let Some(x) = frontier.pop() {
        for &g in &gen_list {
            let y = (x * g) % k;
            if !seen[y as usize] {
                seen[y as usize] = true;
                frontier.push(y);
            }
        }
    }
    let mut out = ResidueSet::new(k);
    out.extend((0..k).filter(|&x| seen[x as usize]));
    Ok(out)
}

/// `{a in 1..k : gcd(a, k) = d}`.
pub fn residues_with_gcd(k: u64, d: u64) -> Result<ResidueSet> {
    if d == 0 || !k.is_multiple_of(d) {
        return Err(Error::NotADivisor { d, k });
    }
    let mut set = ResidueSet::new(k);
    set.extend((1..k).filter(|a| a.gcd(&k) == d));
    Ok(set)
}

pub fn divisors(k: u64) -> Vec<u64> {
    (1..=k).filter(|d| k.is_multiple_of(*d)).collect()
}
