//! Directed multigraphs and their loop spaces.
//!
//! The loop space of a digraph is the span in `Q^E` of its embedded directed
//! loops. For a strongly connected digraph it has dimension `|E| - |V| + 1`;
//! this module computes it exactly so that identity can be checked, along
//! with loop contraction and the free-cylinder count for cylinder digraphs.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_LOOP_CAP: usize = 1_000_000;

/// A finite directed multigraph. Self-loops and parallel edges are allowed;
/// the edge order fixes the basis order of `Q^E`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Digraph {
    num_vertices: usize,
    edges: Vec<(usize, usize)>,
}

impl Digraph {
    pub fn new(num_vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if num_vertices == 0 {
            return Err(Error::MalformedGraph(
                "a digraph needs at least one vertex".into(),
            ));
        }
        if let Some(&(t, h)) = edges
            .iter()
            .find(|&&(t, h)| t >= num_vertices || h >= num_vertices)
        {
            return Err(Error::MalformedGraph(format!(
                "edge ({t}, {h}) out of range for {num_vertices} vertices"
            )));
        }
        Ok(Digraph {
            num_vertices,
            edges,
        })
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// `|E| - |V| + 1`.
    pub fn cycle_rank(&self) -> i64 {
        self.edges.len() as i64 - self.num_vertices as i64 + 1
    }

    fn out_edges(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_vertices];
        for (id, &(t, _)) in self.edges.iter().enumerate() {
            out[t].push(id);
        }
        out
    }

    /// Writes the text format: `V E` on the first line, then one
    /// `tail tip` line per edge.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.num_vertices, self.edges.len());
        for (t, h) in &self.edges {
            s.push_str(&format!("{t} {h}\n"));
        }
        s
    }

    /// The same graph with vertices renamed by `perm` and edges reordered by
    /// `edge_order`.
    pub fn relabel(&self, perm: &[usize], edge_order: &[usize]) -> Result<Digraph> {
        let edges = edge_order
            .iter()
            .map(|&i| {
                let (t, h) = self.edges[i];
                (perm[t], perm[h])
            })
            .collect();
        Digraph::new(self.num_vertices, edges)
    }
}

impl FromStr for Digraph {
    type Err = Error;

    /// Parses the text format. Blank lines and `#` comments are ignored.
    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty());
        let pair = |line: Option<&str>, what: &str| -> Result<(usize, usize)> {
            let line = line.ok_or_else(|| Error::MalformedGraph(format!("missing {what}")))?;
            let nums: Vec<usize> = line
                .split_whitespace()
                .map(|w| w.parse::<usize>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::MalformedGraph(format!("bad {what} {line:?}: {e}")))?;
            match nums[..] {
                [a, b] => Ok((a, b)),
                _ => Err(Error::MalformedGraph(format!(
                    "expected two integers in {what} {line:?}"
                ))),
            }
        };
        let (v, e) = pair(lines.next(), "header")?;
        let edges = (0..e)
            .map(|i| pair(lines.next(), &format!("edge {i}")))
            .collect::<Result<Vec<_>>>()?;
        if let Some(extra) = lines.next() {
            return Err(Error::MalformedGraph(format!(
                "unexpected line after {e} edges: {extra:?}"
            )));
        }
        Digraph::new(v, edges)
    }
}

impl fmt::Display for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

fn reachable(n: usize, adj: &[Vec<usize>], start: usize) -> Vec<bool> {
    let mut seen = vec![false; n];
    seen[start] = true;
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen
}

pub fn is_strongly_connected(g: &Digraph) -> bool {
    let n = g.num_vertices;
    let mut fwd = vec![Vec::new(); n];
    let mut bwd = vec![Vec::new(); n];
    for &(t, h) in &g.edges {
        fwd[t].push(h);
        bwd[h].push(t);
    }
    reachable(n, &fwd, 0).into_iter().all(|x| x) && reachable(n, &bwd, 0).into_iter().all(|x| x)
}

/// An element of `Q^E`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LoopVector {
    coords: Vec<BigRational>,
}

impl LoopVector {
    pub fn new(coords: Vec<BigRational>) -> Self {
        LoopVector { coords }
    }

    /// Indicator vector of a set of edges.
    pub fn indicator(num_edges: usize, edge_ids: &[usize]) -> Self {
        let mut coords = vec![BigRational::zero(); num_edges];
        for &e in edge_ids {
            coords[e] = BigRational::one();
        }
        LoopVector { coords }
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// Edge ids with nonzero coordinate.
    pub fn support(&self) -> Vec<usize> {
        (0..self.coords.len())
            .filter(|&i| !self.coords[i].is_zero())
            .collect()
    }
}

/// All embedded directed loops, each listed once.
///
/// A loop is found from its smallest vertex: the search from `s` only enters
/// vertices above `s` that are not already on the current path. Parallel
/// edges give distinct loops.
pub fn embedded_loops(g: &Digraph, cap: usize) -> Result<Vec<LoopVector>> {
    Ok(loop_edge_lists(g, cap)?
        .iter()
        .map(|ids| LoopVector::indicator(g.num_edges(), ids))
        .collect())
}

/// Embedded loops as edge-id sequences starting at their smallest vertex.
pub fn loop_edge_lists(g: &Digraph, cap: usize) -> Result<Vec<Vec<usize>>> {
    struct Search<'a> {
        g: &'a Digraph,
        out: Vec<Vec<usize>>,
        start: usize,
        on_path: Vec<bool>,
        path: Vec<usize>,
        found: Vec<Vec<usize>>,
        cap: usize,
    }

    impl Search<'_> {
        fn visit(&mut self, v: usize) -> Result<()> {
            for i in 0..self.out[v].len() {
                let e = self.out[v][i];
                let tip = self.g.edges[e].1;
                if tip == self.start {
                    if self.found.len() == self.cap {
                        return Err(Error::CapExceeded(self.cap));
                    }
                    let mut cycle = self.path.clone();
                    cycle.push(e);
                    self.found.push(cycle);
                } else if tip > self.start && !self.on_path[tip] {
                    self.on_path[tip] = true;
                    self.path.push(e);
                    self.visit(tip)?;
                    self.path.pop();
                    self.on_path[tip] = false;
                }
            }
            Ok(())
        }
    }

    let mut search = Search {
        g,
        out: g.out_edges(),
        start: 0,
        on_path: vec![false; g.num_vertices],
        path: Vec::new(),
        found: Vec::new(),
        cap,
    };
    for s in 0..g.num_vertices {
        search.start = s;
        search.on_path[s] = true;
        search.visit(s)?;
        search.on_path[s] = false;
    }
    Ok(search.found)
}

/// Rank of a list of vectors over `Q`, by exact Gaussian elimination.
pub fn rational_rank(rows: &[LoopVector]) -> usize {
    // reduced rows, each with its pivot column
    let mut basis: Vec<(usize, Vec<BigRational>)> = Vec::new();
    let width = rows.first().map_or(0, |r| r.len());
    for row in rows {
        if basis.len() == width {
            break;
        }
        let mut v = row.coords.clone();
        for (pivot, b) in &basis {
            if v[*pivot].is_zero() {
                continue;
            }
            let factor = v[*pivot].clone();
            for (x, y) in v.iter_mut().zip(b) {
                if !y.is_zero() {
                    *x -= &factor * y;
                }
            }
        }
        if let Some(p) = v.iter().position(|x| !x.is_zero()) {
            let inv = v[p].recip();
            v.iter_mut().for_each(|x| *x *= &inv);
            // keep earlier rows reduced against the new pivot
            for (_, b) in basis.iter_mut() {
                if b[p].is_zero() {
                    continue;
                }
                let factor = b[p].clone();
                for (x, y) in b.iter_mut().zip(&v) {
                    if !y.is_zero() {
                        *x -= &factor * y;
                    }
                }
            }
            basis.push((p, v));
        }
    }
    basis.len()
}

pub fn loop_space_dim_capped(g: &Digraph, cap: usize) -> Result<usize> {
    Ok(rational_rank(&embedded_loops(g, cap)?))
}

/// Dimension of the span of embedded loops.
pub fn loop_space_dim(g: &Digraph) -> Result<usize> {
    loop_space_dim_capped(g, DEFAULT_LOOP_CAP)
}

/// Checks that `lv` is the indicator vector of an embedded loop of `g` and
/// returns the loop's vertices.
fn loop_vertices(g: &Digraph, lv: &LoopVector) -> Result<Vec<usize>> {
    if lv.len() != g.num_edges() {
        return Err(Error::NotEmbeddedLoop(format!(
            "vector has {} coordinates, graph has {} edges",
            lv.len(),
            g.num_edges()
        )));
    }
    if let Some(i) = lv.coords.iter().position(|x| !x.is_zero() && !x.is_one()) {
        return Err(Error::NotEmbeddedLoop(format!(
            "coordinate {i} is {}",
            lv.coords[i]
        )));
    }
    let support = lv.support();
    let Some(&first) = support.first() else {
        return Err(Error::NotEmbeddedLoop("empty support".into()));
    };
    let mut next_edge = vec![None; g.num_vertices];
    for &e in &support {
        let t = g.edges[e].0;
        if next_edge[t].replace(e).is_some() {
            return Err(Error::NotEmbeddedLoop(format!("vertex {t} is left twice")));
        }
    }
    let start = g.edges[first].0;
    let mut vertices = vec![start];
    let mut v = g.edges[first].1;
    let mut steps = 1;
    while v != start {
        let e = next_edge[v]
            .ok_or_else(|| Error::NotEmbeddedLoop(format!("path dead-ends at vertex {v}")))?;
        vertices.push(v);
        v = g.edges[e].1;
        steps += 1;
        if steps > support.len() {
            return Err(Error::NotEmbeddedLoop("support does not close up".into()));
        }
    }
    if steps != support.len() {
        return Err(Error::NotEmbeddedLoop(
            "support is more than one loop".into(),
        ));
    }
    Ok(vertices)
}

/// Collapses an embedded loop to a single vertex and deletes its edges.
///
/// Surviving vertices keep their relative order; the merged vertex takes the
/// place of the loop's smallest vertex. Edges between loop vertices that are
/// not on the loop become self-loops.
pub fn contract_loop(g: &Digraph, lv: &LoopVector) -> Result<Digraph> {
    let vertices = loop_vertices(g, lv)?;
    let mut in_loop = vec![false; g.num_vertices];
    for &v in &vertices {
        in_loop[v] = true;
    }
    let rep = *vertices.iter().min().expect("loop has a vertex");
    let mut new_index = vec![0; g.num_vertices];
    let mut next = 0;
    for v in 0..g.num_vertices {
        if !in_loop[v] || v == rep {
            new_index[v] = next;
            next += 1;
        }
    }
    for v in 0..g.num_vertices {
        if in_loop[v] {
            new_index[v] = new_index[rep];
        }
    }
    let support: std::collections::HashSet<usize> = lv.support().into_iter().collect();
    let edges = g
        .edges
        .iter()
        .enumerate()
        .filter(|(id, _)| !support.contains(id))
        .map(|(_, &(t, h))| (new_index[t], new_index[h]))
        .collect();
    Digraph::new(next, edges)
}

/// Cylinder digraph data: one vertex per horizontal cylinder, one edge per
/// horizontal saddle connection from the cylinder below to the one above.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CylinderDigraphSpec {
    pub genus: u64,
    pub zero_count: u64,
    pub saddle_connections: Vec<(usize, usize)>,
}

impl CylinderDigraphSpec {
    fn validate(&self) -> Result<()> {
        if self.genus < 1 || self.zero_count < 1 {
            return Err(Error::MalformedCylinderSpec(format!(
                "need genus >= 1 and at least one zero, got g = {}, s = {}",
                self.genus, self.zero_count
            )));
        }
        let expected = 2 * self.genus - 2 + self.zero_count;
        if self.saddle_connections.len() as u64 != expected {
            return Err(Error::MalformedCylinderSpec(format!(
                "{} saddle connections, but 2g - 2 + s = {expected}",
                self.saddle_connections.len()
            )));
        }
        Ok(())
    }

    /// Number of cylinders mentioned.
    pub fn num_cylinders(&self) -> usize {
        self.saddle_connections
            .iter()
            .map(|&(a, b)| a.max(b) + 1)
            .max()
            .unwrap_or(0)
    }

    pub fn to_digraph(&self) -> Result<Digraph> {
        self.validate()?;
        Digraph::new(self.num_cylinders(), self.saddle_connections.clone())
    }

    /// `g + s - 1`.
    pub fn free_cylinder_threshold(&self) -> u64 {
        self.genus + self.zero_count - 1
    }
}

/// True when `num_free_cylinders` reaches `g + s - 1`, the count that forces
/// the orbit closure to be a stratum component.
pub fn free_cylinder_criterion(
    spec: &CylinderDigraphSpec,
    num_free_cylinders: u64,
) -> Result<bool> {
    spec.validate()?;
    Ok(num_free_cylinders >= spec.free_cylinder_threshold())
}

/// The cylinder count read off from the loop space: `|V| = |E| - dim L + 1`,
/// compared with the `g + s - 1` needed when `dim L <= g`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CylinderCount {
    pub cylinders: usize,
    pub saddle_connections: usize,
    pub loop_space_dim: usize,
    pub threshold: u64,
}

impl CylinderCount {
    pub fn loop_dim_within_genus(&self, genus: u64) -> bool {
        self.loop_space_dim as u64 <= genus
    }

    pub fn meets_threshold(&self) -> bool {
        self.cylinders as u64 >= self.threshold
    }
}

pub fn cylinder_count(spec: &CylinderDigraphSpec) -> Result<CylinderCount> {
    let g = spec.to_digraph()?;
    if !is_strongly_connected(&g) {
        return Err(Error::MalformedCylinderSpec(
            "cylinder digraph is not strongly connected".into(),
        ));
    }
    let dim = loop_space_dim(&g)?;
    let cylinders = (g.num_edges() + 1)
        .checked_sub(dim)
        .ok_or_else(|| Error::Invariant("loop space larger than |E| + 1".into()))?;
    if cylinders != g.num_vertices() {
        return Err(Error::Invariant(format!(
            "|E| - dim L + 1 = {cylinders} but the digraph has {} vertices",
            g.num_vertices()
        )));
    }
    Ok(CylinderCount {
        cylinders,
        saddle_connections: g.num_edges(),
        loop_space_dim: dim,
        threshold: spec.free_cylinder_threshold(),
    })
}

/// A random strongly connected digraph with `1..=max_vertices` vertices and
/// at most `max_edges` edges.
///
/// Built from a random ear decomposition (a cycle, then open or closed ears
/// through new vertices) followed by random extra edges, so every strongly
/// connected shape within the bounds can occur.
pub fn random_strongly_connected<R: Rng>(
    rng: &mut R,
    max_vertices: usize,
    max_edges: usize,
) -> Digraph {
    assert!(
        max_vertices >= 1 && max_edges >= max_vertices,
        "bounds admit no strongly connected digraph"
    );
    loop {
        let n = rng.gen_range(1..=max_vertices);
        let mut order: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            order.swap(i, rng.gen_range(0..=i));
        }
        let mut edges = Vec::new();
        let first = rng.gen_range(1..=n);
        for i in 0..first {
            edges.push((order[i], order[(i + 1) % first]));
        }
        let mut covered = first;
        while covered < n {
            let len = rng.gen_range(1..=n - covered);
            let from = order[rng.gen_range(0..covered)];
            let to = order[rng.gen_range(0..covered)];
            let mut prev = from;
            for &v in &order[covered..covered + len] {
                edges.push((prev, v));
                prev = v;
            }
            edges.push((prev, to));
            covered += len;
        }
        if edges.len() > max_edges {
            continue;
        }
        let target = rng.gen_range(edges.len()..=max_edges);
        while edges.len() < target {
            edges.push((rng.gen_range(0..n), rng.gen_range(0..n)));
        }
        // shuffle the edge order too
        for i in (1..edges.len()).rev() {
            edges.swap(i, rng.gen_range(0..=i));
        }
        return Digraph::new(n, edges).expect("indices in range");
    }
}

/// Outcome of checking the loop-space identity on one digraph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub vertices: usize,
    pub edges: usize,
    pub loop_space_dim: usize,
    pub contracted_dim: Option<usize>,
    pub passed: bool,
}

/// Checks `dim L = |E| - |V| + 1` on `g` and, for one embedded loop, that
/// contraction keeps strong connectivity and drops the dimension by one.
pub fn check_loop_space_identity(g: &Digraph) -> Result<IdentityCheck> {
    let loops = embedded_loops(g, DEFAULT_LOOP_CAP)?;
    let dim = rational_rank(&loops);
    let mut passed = is_strongly_connected(g) && dim as i64 == g.cycle_rank();
    let mut contracted_dim = None;
    if let Some(l) = loops.first() {
        let h = contract_loop(g, l)?;
        let d = loop_space_dim(&h)?;
        passed &= is_strongly_connected(&h) && d + 1 == dim;
        contracted_dim = Some(d);
    }
    Ok(IdentityCheck {
        vertices: g.num_vertices(),
        edges: g.num_edges(),
        loop_space_dim: dim,
        contracted_dim,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn g(n: usize, e: &[(usize, usize)]) -> Digraph {
        Digraph::new(n, e.to_vec()).unwrap()
    }

    #[test]
    fn strong_connectivity() {
        assert!(is_strongly_connected(&g(1, &[(0, 0)])));
        assert!(is_strongly_connected(&g(1, &[])));
        assert!(!is_strongly_connected(&g(2, &[(0, 1)])));
        assert!(is_strongly_connected(&g(2, &[(0, 1), (1, 0)])));
    }

    #[test]
    fn loops_of_small_graphs() {
        assert_eq!(
            embedded_loops(&g(1, &[(0, 0), (0, 0)]), 10).unwrap().len(),
            2
        );
        let two = embedded_loops(&g(2, &[(0, 1), (1, 0), (1, 0)]), 10).unwrap();
        assert_eq!(two.len(), 2);
        assert_eq!(two[0].support(), vec![0, 1]);
        assert_eq!(two[1].support(), vec![0, 2]);
    }

    #[test]
    fn cap_is_enforced() {
        let rose = g(1, &[(0, 0); 5]);
        assert_eq!(embedded_loops(&rose, 4), Err(Error::CapExceeded(4)));
        assert_eq!(embedded_loops(&rose, 5).unwrap().len(), 5);
    }

    #[test]
    fn dims_of_roses() {
        assert_eq!(loop_space_dim(&g(1, &[(0, 0)])).unwrap(), 1);
        assert_eq!(loop_space_dim(&g(1, &[(0, 0), (0, 0)])).unwrap(), 2);
        // a path has no loops
        assert_eq!(loop_space_dim(&g(3, &[(0, 1), (1, 2)])).unwrap(), 0);
    }

    #[test]
    fn contract_figure_eight() {
        let fig8 = g(1, &[(0, 0), (0, 0)]);
        let loops = embedded_loops(&fig8, 10).unwrap();
        let h = contract_loop(&fig8, &loops[0]).unwrap();
        assert_eq!(h, g(1, &[(0, 0)]));
    }

    #[test]
    fn contract_two_cycle_with_chords() {
        // 2-cycle 0 <-> 1 plus a chord pair 1 <-> 2
        let gr = g(3, &[(0, 1), (1, 0), (1, 2), (2, 1)]);
        let lv = LoopVector::indicator(4, &[0, 1]);
        let h = contract_loop(&gr, &lv).unwrap();
        assert_eq!(h, g(2, &[(0, 1), (1, 0)]));
        assert_eq!(loop_space_dim(&gr).unwrap(), 2);
        assert_eq!(loop_space_dim(&h).unwrap(), 1);
    }

    #[test]
    fn contract_hamiltonian_cycle_gives_rose() {
        let gr = g(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (3, 1), (2, 2)]);
        let lv = LoopVector::indicator(7, &[0, 1, 2, 3]);
        let h = contract_loop(&gr, &lv).unwrap();
        assert_eq!(h.num_vertices(), 1);
        assert_eq!(h.num_edges(), 3);
        assert!(h.edges().iter().all(|&(t, s)| t == 0 && s == 0));
    }

    #[test]
    fn contract_rejects_non_loops() {
        let gr = g(3, &[(0, 1), (1, 0), (1, 2), (2, 1)]);
        // two loops sharing vertex 1
        let bad = LoopVector::indicator(4, &[0, 1, 2, 3]);
        assert!(matches!(
            contract_loop(&gr, &bad),
            Err(Error::NotEmbeddedLoop(_))
        ));
        let open = LoopVector::indicator(4, &[0]);
        assert!(matches!(
            contract_loop(&gr, &open),
            Err(Error::NotEmbeddedLoop(_))
        ));
        let empty = LoopVector::indicator(4, &[]);
        assert!(matches!(
            contract_loop(&gr, &empty),
            Err(Error::NotEmbeddedLoop(_))
        ));
        let short = LoopVector::indicator(3, &[0, 1]);
        assert!(matches!(
            contract_loop(&gr, &short),
            Err(Error::NotEmbeddedLoop(_))
        ));
    }

    #[test]
    fn text_format() {
        let gr: Digraph = "# rose\n1 2\n0 0\n0 0\n".parse().unwrap();
        assert_eq!(gr, g(1, &[(0, 0), (0, 0)]));
        assert_eq!(gr.to_text().parse::<Digraph>().unwrap(), gr);
        assert!("2 1\n0 5\n".parse::<Digraph>().is_err());
        assert!("2 2\n0 1\n".parse::<Digraph>().is_err());
        assert!("2 1\n0 1\n1 0\n".parse::<Digraph>().is_err());
        assert!("x y\n".parse::<Digraph>().is_err());
    }

    #[test]
    fn free_cylinder_examples() {
        let spec = |g: u64, s: u64, e: usize| CylinderDigraphSpec {
            genus: g,
            zero_count: s,
            saddle_connections: vec![(0, 0); e],
        };
        assert!(free_cylinder_criterion(&spec(2, 1, 3), 2).unwrap());
        assert!(!free_cylinder_criterion(&spec(2, 1, 3), 1).unwrap());
        assert!(free_cylinder_criterion(&spec(3, 2, 6), 4).unwrap());
        assert!(matches!(
            free_cylinder_criterion(&spec(2, 1, 4), 2),
            Err(Error::MalformedCylinderSpec(_))
        ));
        assert!(matches!(
            free_cylinder_criterion(&spec(0, 1, 0), 2),
            Err(Error::MalformedCylinderSpec(_))
        ));
    }

    #[test]
    fn cylinder_count_two_cylinders_in_h2() {
        // genus 2, one zero: 3 saddle connections between 2 cylinders
        let spec = CylinderDigraphSpec {
            genus: 2,
            zero_count: 1,
            saddle_connections: vec![(0, 1), (1, 0), (1, 1)],
        };
        let count = cylinder_count(&spec).unwrap();
        assert_eq!(count.cylinders, 2);
        assert_eq!(count.loop_space_dim, 2);
        assert!(count.loop_dim_within_genus(2));
        assert!(count.meets_threshold());
    }

    #[test]
    fn random_graphs_respect_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..300 {
            let gr = random_strongly_connected(&mut rng, 8, 14);
            assert!(gr.num_vertices() <= 8 && gr.num_edges() <= 14);
            assert!(is_strongly_connected(&gr));
        }
    }

    #[test]
    fn rank_of_dependent_rows() {
        let rows = vec![
            LoopVector::indicator(3, &[0, 1]),
            LoopVector::indicator(3, &[1, 2]),
            LoopVector::new(vec![
                BigRational::one(),
                BigRational::zero(),
                -BigRational::one(),
            ]),
        ];
        assert_eq!(rational_rank(&rows), 2);
        assert_eq!(rational_rank(&[]), 0);
    }
}
