//! Eigenspace dimensions of the cyclic cover `y^k = prod (z - z_i)^{q_i}`,
//! genus and stratum of the unfolding, and the two cheap structural
//! criteria (hyperellipticity exclusion and the pi/3 case).

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::angle::{t_total, AngleSystem};
use crate::error::{Error, Result};

/// `dim H^{1,0}_ell = t(-ell) - 1`, and 0 on the invariant part.
pub fn eigenform_dim(sys: &AngleSystem, ell: i64) -> u64 {
    if sys.residue(ell) == 0 {
        return 0;
    }
    t_total(sys, -ell).saturating_sub(1)
}

/// `dim H^1_ell = t(ell) + t(-ell) - 2`, and 0 on the invariant part.
pub fn eigenspace_dim(sys: &AngleSystem, ell: i64) -> u64 {
    if sys.residue(ell) == 0 {
        return 0;
    }
    (t_total(sys, ell) + t_total(sys, -ell)).saturating_sub(2)
}

/// Per-eigenvalue dimensions for `ell = 0..k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EigenProfile {
    pub k: u64,
    pub holo_dims: Vec<u64>,
    pub abs_dims: Vec<u64>,
}

impl EigenProfile {
    pub fn of(sys: &AngleSystem) -> Self {
        let k = sys.k();
        EigenProfile {
            k,
            holo_dims: (0..k as i64).map(|l| eigenform_dim(sys, l)).collect(),
            abs_dims: (0..k as i64).map(|l| eigenspace_dim(sys, l)).collect(),
        }
    }

    pub fn genus(&self) -> u64 {
        self.holo_dims.iter().sum()
    }
}

/// Genus from the eigenspace decomposition; for triangles it is cross-checked
/// against Riemann-Hurwitz.
pub fn genus(sys: &AngleSystem) -> Result<u64> {
    let twice: u64 = (1..sys.k() as i64).map(|l| eigenspace_dim(sys, l)).sum();
    if !twice.is_multiple_of(2) {
        return Err(Error::Invariant(format!(
            "eigenspace dimensions of {sys} sum to the odd number {twice}"
        )));
    }
    let g = twice / 2;
    if sys.is_triangle() && sys.is_normalized() {
        let rh = riemann_hurwitz_genus(sys);
        if rh != g {
            return Err(Error::Invariant(format!(
                "genus of {sys}: eigenspaces give {g}, Riemann-Hurwitz gives {rh}"
            )));
        }
    }
    Ok(g)
}

/// `1 + (k - sum gcd(q_i, k)) / 2` for a connected triangle cover.
fn riemann_hurwitz_genus(sys: &AngleSystem) -> u64 {
    let k = sys.k();
    let ramified: u64 = sys.q().iter().map(|q| q.gcd(&k)).sum();
    1 + (k - ramified) / 2
}

/// Zero orders of `omega_z`, plus the count of regular points among the
/// preimages of the vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StratumSignature {
    /// Sorted descending.
    pub zero_orders: Vec<u64>,
    pub marked_points: u64,
}

impl StratumSignature {
    pub fn total_order(&self) -> u64 {
        self.zero_orders.iter().sum()
    }

    /// Number of distinct zeros.
    pub fn zero_count(&self) -> usize {
        self.zero_orders.len()
    }
}

impl fmt::Display for StratumSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "H(")?;
        for (i, m) in self.zero_orders.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{m}")?;
        }
        write!(f, ")")
    }
}

/// Stratum of the unfolding of a triangle.
///
/// Vertex `i` has `d_i = gcd(q_i, k)` preimages, each a zero of order
/// `q_i / d_i - 1`. Preimages of order 0 are counted as marked points.
pub fn stratum(sys: &AngleSystem) -> Result<StratumSignature> {
    sys.require_triangle()?;
    let k = sys.k();
    let mut zero_orders = Vec::new();
    let mut marked_points = 0;
    for &q in sys.q() {
        let d = q.gcd(&k);
        let order = q / d - 1;
        if order > 0 {
            zero_orders.extend(std::iter::repeat_n(order, d as usize));
        } else {
            marked_points += d;
        }
    }
    zero_orders.sort_unstable_by(|a, b| b.cmp(a));
    Ok(StratumSignature {
        zero_orders,
        marked_points,
    })
}

/// `k` odd and either `n > 4` or more than two distinct angles.
pub fn hyperelliptic_excluded(sys: &AngleSystem) -> bool {
    let mut distinct = sys.q().to_vec();
    distinct.dedup();
    sys.k() % 2 == 1 && (sys.n() > 4 || distinct.len() > 2)
}

/// All angles are multiples of `pi / 3`.
pub fn full_rank_by_pi3(sys: &AngleSystem) -> bool {
    3 % sys.reduced().k() == 0
}
