//! Full-rank certification for unfoldings of rational triangles.
//!
//! [`build_relations`] runs the divisor/unit-group bookkeeping over
//! `a = 2..k`, [`full_rank_certified`] reads off the verdict, and
//! [`make_certificate`] combines it with genus, stratum and the
//! hyperellipticity criterion into a [`Certificate`].

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::angle::{
    multiplicative_closure, t_total, unit_group, AngleSystem, GcdPolicy, ResidueSet,
};
use crate::error::{Error, Result};
use crate::hodge::{genus, hyperelliptic_excluded, stratum, StratumSignature};

/// Divisors `d | k` such that some `a` with `gcd(a, k) = d` has `t(-a) > 1`.
pub fn divisor_set(sys: &AngleSystem) -> Result<BTreeSet<u64>> {
    sys.require_triangle()?;
    sys.require_normalized()?;
    let k = sys.k();
    Ok((1..k)
        .filter(|&a| t_total(sys, -(a as i64)) > 1)
        .map(|a| a.gcd(&k))
        .collect())
}

/// Disjoint-set forest over `0..n` with path compression and union by size.
struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        let (big, small) = if self.size[ra] >= self.size[rb] {
            (ra, rb)
        } else {
            (rb, ra)
        };
        self.parent[small] = big;
        self.size[big] += self.size[small];
    }
}

/// State of the certification loop after it finishes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationTrace {
    /// The divisor set.
    pub divisors: BTreeSet<u64>,
    /// Linked divisor pairs, stored as `(min, max)`.
    pub links: BTreeSet<(u64, u64)>,
    /// Units collected by the loop and the `1 mod k/d` augmentation.
    pub units: ResidueSet,
    /// Subgroup generated by `units`.
    pub closure: ResidueSet,
    /// Partition of `divisors` under the equivalence generated by `links`.
    pub classes: Vec<Vec<u64>>,
}

impl RelationTrace {
    pub fn single_class(&self) -> bool {
        self.classes.len() == 1
    }

    pub fn generates_unit_group(&self) -> bool {
        // the unit group has phi(k) elements and the closure sits inside it
        let k = self.closure.modulus();
        self.closure.len() == (1..k).filter(|a| a.gcd(&k) == 1).count()
    }
}

fn equivalence_classes(divisors: &BTreeSet<u64>, links: &BTreeSet<(u64, u64)>) -> Vec<Vec<u64>> {
    let ds: Vec<u64> = divisors.iter().copied().collect();
    let index = |d: u64| {
        ds.binary_search(&d)
            .expect("linked divisor outside the divisor set")
    };
    let mut uf = UnionFind::new(ds.len());
    for &(a, b) in links {
        uf.union(index(a), index(b));
    }
    let mut by_root: std::collections::BTreeMap<usize, Vec<u64>> = Default::default();
    for (i, &d) in ds.iter().enumerate() {
        by_root.entry(uf.find(i)).or_default().push(d);
    }
    let mut classes: Vec<Vec<u64>> = by_root.into_values().collect();
    classes.sort();
    classes
}

/// Runs the certification loop for a normalized triangle.
///
/// `D` starts at `{1}`, `A` at `{1, -1}`. For each `a` in `2..k` with
/// `t(-a) > 1`, `gcd(a, k)` joins `D`; when also `t(-(2-a)) > 1`, equal gcds
/// put every unit `w` with `w a = 2 - a` into `A`, and unequal gcds link the
/// two divisors. Finally `A` gains every unit that is `1 mod k/d` for `d` in
/// `D`.
pub fn build_relations(sys: &AngleSystem) -> Result<RelationTrace> {
    sys.require_triangle()?;
    sys.require_normalized()?;
    let k = sys.k();
    let units_k = unit_group(k)?;

    let mut divisors: BTreeSet<u64> = BTreeSet::from([1]);
    let mut links = BTreeSet::new();
    let mut units = ResidueSet::from_residues(k, [1, -1]);

    for a in 2..k {
        let a_i = a as i64;
        if t_total(sys, -a_i) <= 1 {
            continue;
        }
        let d1 = a.gcd(&k);
        divisors.insert(d1);
        let b = sys.residue(2 - a_i);
        if t_total(sys, -(b as i64)) <= 1 {
            continue;
        }
        let d2 = b.gcd(&k);
        if d1 == d2 {
            units.extend(units_k.iter().filter(|w| (w * a) % k == b));
        } else {
            links.insert((d1.min(d2), d1.max(d2)));
        }
    }

    for &d in &divisors {
        let m = k / d;
        units.extend(units_k.iter().filter(|x| x % m == 1 % m));
    }

    let classes = equivalence_classes(&divisors, &links);
    let closure = multiplicative_closure(&units)?;
    Ok(RelationTrace {
        divisors,
        links,
        units,
        closure,
        classes,
    })
}

/// True when the divisor set forms one class and `A` generates `(Z/k)^*`.
pub fn full_rank_certified(sys: &AngleSystem) -> Result<bool> {
    let trace = build_relations(sys)?;
    Ok(trace.single_class() && trace.generates_unit_group())
}

/// Some unit `a` with `2a != 2 mod k`, `t(-a) > 1` and `t(-(2-a)) > 1`.
pub fn has_unstable_pair(sys: &AngleSystem) -> bool {
    let k = sys.k();
    (1..k).filter(|a| a.gcd(&k) == 1).any(|a| {
        let a_i = a as i64;
        sys.residue(2 * a_i) != sys.residue(2)
            && t_total(sys, -a_i) > 1
            && sys.residue(2 - a_i) != 0
            && t_total(sys, a_i - 2) > 1
    })
}

/// Lower bound for the rank of the orbit closure of the unfolding.
pub fn rank_lower_bound(sys: &AngleSystem) -> Result<u64> {
    sys.require_triangle()?;
    let g = genus(sys)?;
    let certified = full_rank_certified(sys)?;
    Ok(rank_bound_from(sys, g, certified))
}

fn rank_bound_from(sys: &AngleSystem, genus: u64, certified: bool) -> u64 {
    let n = sys.n() as u64;
    let k = sys.k();
    let some_not_right_multiple = sys.q().iter().any(|&q| (2 * q) % k != 0);
    let mut bound = if some_not_right_multiple {
        n - 2
    } else {
        (n - 2).div_ceil(2)
    };
    if has_unstable_pair(sys) {
        bound = bound.max(n - 1);
    }
    if certified {
        bound = bound.max(genus);
    }
    // rank never exceeds genus
    bound.min(genus.max(1))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    /// Full rank, not hyperelliptic, genus at least 3: the orbit closure is a
    /// stratum component and the generic orbit is dense in it.
    DenseInStratumComponent,
    /// Full rank, but the hyperelliptic locus or low genus is not ruled out.
    FullRankUndetermined,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::DenseInStratumComponent => "DenseInStratumComponent",
            Verdict::FullRankUndetermined => "FullRankUndetermined",
            Verdict::Inconclusive => "Inconclusive",
        })
    }
}

impl FromStr for Verdict {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "DenseInStratumComponent" => Ok(Verdict::DenseInStratumComponent),
            "FullRankUndetermined" => Ok(Verdict::FullRankUndetermined),
            "Inconclusive" => Ok(Verdict::Inconclusive),
            other => Err(format!("unknown verdict {other:?}")),
        }
    }
}

/// Everything known about one normalized triangle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "CertificateRecord", try_from = "CertificateRecord")]
pub struct Certificate {
    pub sys: AngleSystem,
    pub genus: u64,
    pub stratum: StratumSignature,
    pub rank_lower_bound: u64,
    pub full_rank_certified: bool,
    pub hyperelliptic_excluded: bool,
    pub verdict: Verdict,
    pub trace: RelationTrace,
}

pub fn make_certificate(sys: &AngleSystem) -> Result<Certificate> {
    sys.require_triangle()?;
    sys.require_normalized()?;
    let genus = genus(sys)?;
    let stratum = stratum(sys)?;
    let trace = build_relations(sys)?;
    let full_rank = trace.single_class() && trace.generates_unit_group();
    let hyp = hyperelliptic_excluded(sys);
    let verdict = match (full_rank, hyp && genus >= 3) {
        (true, true) => Verdict::DenseInStratumComponent,
        (true, false) => Verdict::FullRankUndetermined,
        (false, _) => Verdict::Inconclusive,
    };
    let rank_lower_bound = rank_bound_from(sys, genus, full_rank);
    if full_rank && rank_lower_bound != genus {
        return Err(Error::Invariant(format!(
            "{sys}: certified full rank but rank bound {rank_lower_bound} != genus {genus}"
        )));
    }
    Ok(Certificate {
        sys: sys.clone(),
        genus,
        stratum,
        rank_lower_bound,
        full_rank_certified: full_rank,
        hyperelliptic_excluded: hyp,
        verdict,
        trace,
    })
}

/// Serialized form of a [`RelationTrace`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceRecord {
    #[serde(rename = "D")]
    pub d: Vec<u64>,
    #[serde(rename = "E")]
    pub e: Vec<(u64, u64)>,
    #[serde(rename = "A_generators")]
    pub a_generators: Vec<u64>,
    #[serde(rename = "A_closure_size")]
    pub a_closure_size: usize,
    pub classes: Vec<Vec<u64>>,
}

/// Stable JSON shape of a [`Certificate`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateRecord {
    pub q: Vec<u64>,
    pub k: u64,
    pub genus: u64,
    pub stratum: Vec<u64>,
    pub marked_points: u64,
    pub rank_lower_bound: u64,
    pub full_rank: bool,
    pub hyperelliptic_excluded: bool,
    pub verdict: Verdict,
    pub trace: TraceRecord,
}

impl From<Certificate> for CertificateRecord {
    fn from(c: Certificate) -> Self {
        CertificateRecord {
            q: c.sys.q().to_vec(),
            k: c.sys.k(),
            genus: c.genus,
            stratum: c.stratum.zero_orders,
            marked_points: c.stratum.marked_points,
            rank_lower_bound: c.rank_lower_bound,
            full_rank: c.full_rank_certified,
            hyperelliptic_excluded: c.hyperelliptic_excluded,
            verdict: c.verdict,
            trace: TraceRecord {
                d: c.trace.divisors.into_iter().collect(),
                e: c.trace.links.into_iter().collect(),
                a_generators: c.trace.units.to_vec(),
                a_closure_size: c.trace.closure.len(),
                classes: c.trace.classes,
            },
        }
    }
}

impl TryFrom<CertificateRecord> for Certificate {
    type Error = Error;

    /// Rebuilds the certificate from its numerators and checks that every
    /// recorded field agrees with a fresh computation.
    fn try_from(rec: CertificateRecord) -> Result<Self> {
        let q: Vec<i64> = rec.q.iter().map(|&x| x as i64).collect();
        let sys = AngleSystem::new(&q, GcdPolicy::Strict)?;
        if sys.k() != rec.k {
            return Err(Error::Invariant(format!(
                "record lists k = {} for numerators summing to {}",
                rec.k,
                sys.k()
            )));
        }
        let cert = make_certificate(&sys)?;
        if CertificateRecord::from(cert.clone()) != rec {
            return Err(Error::Invariant(format!(
                "record for {sys} does not match its recomputed certificate"
            )));
        }
        Ok(cert)
    }
}

/// Which triples an enumeration visits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Filters {
    pub odd_k: bool,
    pub distinct_q: bool,
    pub gcd_one: bool,
}

impl Filters {
    pub const ALL: Filters = Filters {
        odd_k: true,
        distinct_q: true,
        gcd_one: true,
    };
    pub const NONE: Filters = Filters {
        odd_k: false,
        distinct_q: false,
        gcd_one: false,
    };

    pub fn admits(&self, q: [u64; 3]) -> bool {
        let k = q[0] + q[1] + q[2];
        (!self.odd_k || k % 2 == 1)
            && (!self.distinct_q || (q[0] < q[1] && q[1] < q[2]))
            && (!self.gcd_one || q[0].gcd(&q[1]).gcd(&q[2]) == 1)
    }
}

impl Default for Filters {
    fn default() -> Self {
        Filters::ALL
    }
}

/// Sorted triples `q1 <= q2 <= q3` with `3 <= q1 + q2 + q3 <= k_max`, in
/// order of `k` and then lexicographically.
pub fn triples(k_max: u64, filters: Filters) -> impl Iterator<Item = [u64; 3]> {
    (3..=k_max).flat_map(move |k| {
        (1..=k / 3).flat_map(move |q1| {
            (q1..=(k - q1) / 2).filter_map(move |q2| {
                let t = [q1, q2, k - q1 - q2];
                filters.admits(t).then_some(t)
            })
        })
    })
}

/// One enumerated triple with the certificate of its reduced form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub q: [u64; 3],
    pub certificate: Certificate,
}

impl Entry {
    pub fn k(&self) -> u64 {
        self.q.iter().sum()
    }
}

/// Certifies every triple admitted by `filters`, in [`triples`] order.
///
/// Work is spread over the current rayon pool; output order does not
/// depend on the number of threads.
pub fn enumerate_certificates(k_max: u64, filters: Filters) -> Result<Vec<Entry>> {
    let list: Vec<[u64; 3]> = triples(k_max, filters).collect();
    list.into_par_iter()
        .map(|q| {
            let sys =
                AngleSystem::triangle(q[0] as i64, q[1] as i64, q[2] as i64, GcdPolicy::Reduce)?;
            Ok(Entry {
                q,
                certificate: make_certificate(&sys)?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Statistics {
    pub k_max: u64,
    pub filters: Filters,
    pub total: usize,
    pub full_rank: usize,
    pub dense: usize,
}

impl Statistics {
    pub fn from_entries(k_max: u64, filters: Filters, entries: &[Entry]) -> Self {
        Statistics {
            k_max,
            filters,
            total: entries.len(),
            full_rank: entries
                .iter()
                .filter(|e| e.certificate.full_rank_certified)
                .count(),
            dense: entries
                .iter()
                .filter(|e| e.certificate.verdict == Verdict::DenseInStratumComponent)
                .count(),
        }
    }

    /// Share of triangles with a dense-orbit verdict.
    pub fn dense_fraction(&self) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.dense as f64 / self.total as f64
        }
    }
}

pub fn statistics(k_max: u64, filters: Filters) -> Result<Statistics> {
    let entries = enumerate_certificates(k_max, filters)?;
    Ok(Statistics::from_entries(k_max, filters, &entries))
}
