//! Weighted directed acyclic graphs, path counting and the
//! Lindström–Gessel–Viennot determinant oracle.

use std::collections::VecDeque;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{format_rational, int, parse_rational};
use crate::{ExactMatrix, Rational};

/// Default cap on the number of paths listed per origin/destination pair.
pub const DEFAULT_PATH_BOUND: usize = 100_000;

#[derive(Clone, Debug, PartialEq)]
pub struct Edge {
    pub source: usize,
    pub target: usize,
    pub weight: Rational,
    /// Number of parallel copies of the edge.
    pub multiplicity: u32,
}

/// DAG with non-negative rational edge weights and ordered origins and
/// destinations. Acyclicity is checked on construction.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedDag {
    vertex_count: usize,
    edges: Vec<Edge>,
    origins: Vec<usize>,
    destinations: Vec<usize>,
    order: Vec<usize>,
    out: Vec<Vec<usize>>,
}

impl WeightedDag {
    pub fn new(vertex_count: usize, edges: Vec<Edge>, origins: Vec<usize>, destinations: Vec<usize>) -> Result<Self> {
        for e in &edges {
            if e.source >= vertex_count || e.target >= vertex_count {
                return Err(Error::Graph(format!("edge {}->{} leaves the vertex range", e.source, e.target)));
            }
            if e.weight.is_negative() {
                return Err(Error::Graph(format!("negative weight on edge {}->{}", e.source, e.target)));
            }
            if e.multiplicity == 0 {
                return Err(Error::Graph(format!("zero multiplicity on edge {}->{}", e.source, e.target)));
            }
        }
        if origins.len() != destinations.len() {
            return Err(Error::Graph("origin and destination lists differ in length".into()));
        }
        if origins.iter().chain(&destinations).any(|&v| v >= vertex_count) {
            return Err(Error::Graph("terminal vertex out of range".into()));
        }
        let mut out = vec![Vec::new(); vertex_count];
        let mut indeg = vec![0usize; vertex_count];
        for (i, e) in edges.iter().enumerate() {
            out[e.source].push(i);
            indeg[e.target] += 1;
        }
        let mut queue: VecDeque<usize> = (0..vertex_count).filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(vertex_count);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &ei in &out[v] {
                let t = edges[ei].target;
                indeg[t] -= 1;
                if indeg[t] == 0 {
                    queue.push_back(t);
                }
            }
        }
        if order.len() != vertex_count {
            return Err(Error::Graph("graph contains a directed cycle".into()));
        }
        Ok(WeightedDag { vertex_count, edges, origins, destinations, order, out })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn origins(&self) -> &[usize] {
        &self.origins
    }

    pub fn destinations(&self) -> &[usize] {
        &self.destinations
    }

    /// Same graph with new terminal lists.
    pub fn with_terminals(&self, origins: Vec<usize>, destinations: Vec<usize>) -> Result<Self> {
        WeightedDag::new(self.vertex_count, self.edges.clone(), origins, destinations)
    }

    /// Same topology with replaced edge weights.
    pub fn with_weights(&self, weights: &[Rational]) -> Result<Self> {
        if weights.len() != self.edges.len() {
            return Err(Error::Dimension("one weight per edge required".into()));
        }
        let edges = self.edges.iter().zip(weights).map(|(e, w)| Edge { weight: w.clone(), ..e.clone() }).collect();
        WeightedDag::new(self.vertex_count, edges, self.origins.clone(), self.destinations.clone())
    }

    /// Weighted path sums from `o` to every vertex.
    pub fn path_sums_from(&self, o: usize) -> Vec<Rational> {
        let mut f = vec![Rational::zero(); self.vertex_count];
        f[o] = Rational::one();
        for &v in &self.order {
            if f[v].is_zero() {
                continue;
            }
            for &ei in &self.out[v] {
                let e = &self.edges[ei];
                let add = f[v].clone() * e.weight.clone() * int(e.multiplicity as i64);
                f[e.target] += add;
            }
        }
        f
    }

    /// Sum over all paths `o → d` of the product of edge weights.
    pub fn count_paths(&self, o: usize, d: usize) -> Result<Rational> {
        if o >= self.vertex_count || d >= self.vertex_count {
            return Err(Error::Graph("vertex out of range".into()));
        }
        Ok(self.path_sums_from(o).swap_remove(d))
    }

    /// `A[i][j] = count_paths(o_i, d_j)`.
    pub fn path_matrix(&self) -> ExactMatrix {
        let n = self.origins.len();
        let mut a = ExactMatrix::zeros(n, n);
        for (i, &o) in self.origins.iter().enumerate() {
            let f = self.path_sums_from(o);
            for (j, &d) in self.destinations.iter().enumerate() {
                a[(i, j)] = f[d].clone();
            }
        }
        a
    }

    /// All paths `o → d` as vertex sequences with their weight (parallel
    /// edges folded into the weight).
    pub fn list_paths(&self, o: usize, d: usize, bound: usize) -> Result<Vec<(Vec<usize>, Rational)>> {
        // Prune vertices that cannot reach d.
        let mut reach = vec![false; self.vertex_count];
        reach[d] = true;
        for &v in self.order.iter().rev() {
            if self.out[v].iter().any(|&ei| reach[self.edges[ei].target]) {
                reach[v] = true;
            }
        }
        let mut found = Vec::new();
        if !reach[o] {
            return Ok(found);
        }
        let mut stack = vec![o];
        self.walk(d, &reach, &mut stack, Rational::one(), &mut found, bound)?;
        Ok(found)
    }

    fn walk(
        &self,
        d: usize,
        reach: &[bool],
        stack: &mut Vec<usize>,
        w: Rational,
        found: &mut Vec<(Vec<usize>, Rational)>,
        bound: usize,
    ) -> Result<()> {
        let v = *stack.last().expect("path stack is never empty");
        if v == d {
            if found.len() >= bound {
                return Err(Error::Resource(format!("more than {bound} paths between one terminal pair")));
            }
            found.push((stack.clone(), w));
            return Ok(());
        }
        for &ei in &self.out[v] {
            let e = &self.edges[ei];
            if !reach[e.target] {
                continue;
            }
            stack.push(e.target);
            let we = w.clone() * e.weight.clone() * int(e.multiplicity as i64);
            self.walk(d, reach, stack, we, found, bound)?;
            stack.pop();
        }
        Ok(())
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            vertices: self.vertex_count,
            edges: self
                .edges
                .iter()
                .map(|e| (e.source, e.target, format_rational(&e.weight), e.multiplicity))
                .collect(),
            origins: self.origins.clone(),
            destinations: self.destinations.clone(),
        }
    }

    pub fn from_json(g: &GraphJson) -> Result<Self> {
        let edges = g
            .edges
            .iter()
            .map(|(s, t, w, m)| Ok(Edge { source: *s, target: *t, weight: parse_rational(w)?, multiplicity: *m }))
            .collect::<Result<Vec<_>>>()?;
        WeightedDag::new(g.vertices, edges, g.origins.clone(), g.destinations.clone())
    }
}

/// Serialized graph: `{"vertices":N,"edges":[[s,t,"w",mult],...],"origins":[...],"destinations":[...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphJson {
    pub vertices: usize,
    pub edges: Vec<(usize, usize, String, u32)>,
    pub origins: Vec<usize>,
    pub destinations: Vec<usize>,
}

/// One family of vertex-disjoint paths, `paths[i]` running from `o_i` to
/// `d_{σ(i)}`.
#[derive(Clone, Debug, PartialEq)]
pub struct PathSystem {
    pub permutation: Vec<usize>,
    pub paths: Vec<Vec<usize>>,
    pub weight: Rational,
}

/// Result of the exhaustive search.
#[derive(Clone, Debug, PartialEq)]
pub struct Enumeration {
    /// `Σ_σ sgn(σ) · (weighted count of non-intersecting σ-systems)`.
    pub signed_total: Rational,
    /// Weighted count per permutation that admits at least one system.
    pub by_permutation: Vec<(Vec<usize>, Rational)>,
    /// Number of non-intersecting systems found (unweighted).
    pub systems: usize,
}

impl Enumeration {
    /// True when only the identity permutation carries systems.
    pub fn non_permutable(&self) -> bool {
        self.by_permutation.iter().all(|(p, _)| p.iter().enumerate().all(|(i, &j)| i == j))
    }
}

pub fn permutation_sign(p: &[usize]) -> i64 {
    let mut inversions = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

struct Search<'a> {
    lists: &'a [Vec<Vec<(Vec<u64>, Rational)>>],
    n: usize,
    words: usize,
    keep_systems: bool,
}

impl Search<'_> {
    #[allow(clippy::too_many_arguments)]
    fn go(
        &self,
        i: usize,
        used_dest: &mut [bool],
        perm: &mut Vec<usize>,
        occupied: &mut Vec<u64>,
        choice: &mut Vec<usize>,
        w: Rational,
        acc: &mut Vec<(Vec<usize>, Rational, usize)>,
        systems: &mut Vec<(Vec<usize>, Vec<usize>, Rational)>,
    ) {
        if i == self.n {
            match acc.iter_mut().find(|(p, _, _)| p == perm) {
                Some(entry) => {
                    entry.1 += w.clone();
                    entry.2 += 1;
                }
                None => acc.push((perm.clone(), w.clone(), 1)),
            }
            if self.keep_systems {
                systems.push((perm.clone(), choice.clone(), w));
            }
            return;
        }
        for j in 0..self.n {
            if used_dest[j] {
                continue;
            }
            for (idx, (mask, pw)) in self.lists[i][j].iter().enumerate() {
                if mask.iter().zip(occupied.iter()).any(|(a, b)| a & b != 0) {
                    continue;
                }
                for k in 0..self.words {
                    occupied[k] |= mask[k];
                }
                used_dest[j] = true;
                perm.push(j);
                choice.push(idx);
                self.go(i + 1, used_dest, perm, occupied, choice, w.clone() * pw.clone(), acc, systems);
                choice.pop();
                perm.pop();
                used_dest[j] = false;
                for k in 0..self.words {
                    occupied[k] &= !mask[k];
                }
            }
        }
    }
}

fn enumerate_impl(g: &WeightedDag, bound: usize, keep: bool) -> Result<(Enumeration, Vec<PathSystem>)> {
    let n = g.origins.len();
    let words = g.vertex_count.div_ceil(64).max(1);
    let mut raw: Vec<Vec<Vec<(Vec<usize>, Rational)>>> = Vec::with_capacity(n);
    for &o in &g.origins {
        let mut row = Vec::with_capacity(n);
        for &d in &g.destinations {
            row.push(g.list_paths(o, d, bound)?);
        }
        raw.push(row);
    }
    let lists: Vec<Vec<Vec<(Vec<u64>, Rational)>>> = raw
        .iter()
        .map(|row| {
            row.iter()
                .map(|paths| {
                    paths
                        .iter()
                        .map(|(p, w)| {
                            let mut mask = vec![0u64; words];
                            for &v in p {
                                mask[v / 64] |= 1 << (v % 64);
                            }
                            (mask, w.clone())
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let search = Search { lists: &lists, n, words, keep_systems: keep };
    let mut acc = Vec::new();
    let mut found = Vec::new();
    search.go(
        0,
        &mut vec![false; n],
        &mut Vec::new(),
        &mut vec![0u64; words],
        &mut Vec::new(),
        Rational::one(),
        &mut acc,
        &mut found,
    );
    acc.sort_by(|a, b| a.0.cmp(&b.0));
    let mut signed_total = Rational::zero();
    let mut systems = 0;
    for (p, w, c) in &acc {
        signed_total += int(permutation_sign(p)) * w.clone();
        systems += c;
    }
    let by_permutation = acc.into_iter().map(|(p, w, _)| (p, w)).collect();
    let listed = found
        .into_iter()
        .map(|(perm, choice, weight)| {
            let paths = choice.iter().enumerate().map(|(i, &c)| raw[i][perm[i]][c].0.clone()).collect();
            PathSystem { permutation: perm, paths, weight }
        })
        .collect();
    Ok((Enumeration { signed_total, by_permutation, systems }, listed))
}

/// Exhaustive signed count of vertex-disjoint path systems.
pub fn enumerate_nonintersecting(g: &WeightedDag) -> Result<Rational> {
    enumerate_detailed(g, DEFAULT_PATH_BOUND).map(|e| e.signed_total)
}

pub fn enumerate_detailed(g: &WeightedDag, bound: usize) -> Result<Enumeration> {
    enumerate_impl(g, bound, false).map(|(e, _)| e)
}

/// Lists every non-intersecting system. Intended for small graphs.
pub fn list_systems(g: &WeightedDag, bound: usize) -> Result<Vec<PathSystem>> {
    enumerate_impl(g, bound, true).map(|(_, s)| s)
}

/// `(det(path_matrix), brute-force signed count)`.
pub fn lgv_check(g: &WeightedDag) -> Result<(Rational, Rational)> {
    let det = g.path_matrix().det()?;
    let enumerated = enumerate_nonintersecting(g)?;
    Ok((det, enumerated))
}

/// Rectangular street grid `0..=width × 0..=height` with unit edges pointing
/// east and north. Vertex `(x, y)` has id `y·(width+1) + x`.
pub fn street_grid(
    width: usize,
    height: usize,
    origins: &[(usize, usize)],
    destinations: &[(usize, usize)],
) -> Result<WeightedDag> {
    let id = |x: usize, y: usize| y * (width + 1) + x;
    let mut edges = Vec::new();
    for y in 0..=height {
        for x in 0..=width {
            if x < width {
                edges.push(Edge { source: id(x, y), target: id(x + 1, y), weight: Rational::one(), multiplicity: 1 });
            }
            if y < height {
                edges.push(Edge { source: id(x, y), target: id(x, y + 1), weight: Rational::one(), multiplicity: 1 });
            }
        }
    }
    let vid = |&(x, y): &(usize, usize)| -> Result<usize> {
        if x > width || y > height {
            return Err(Error::Graph(format!("corner ({x},{y}) outside the grid")));
        }
        Ok(id(x, y))
    };
    let o = origins.iter().map(vid).collect::<Result<Vec<_>>>()?;
    let d = destinations.iter().map(vid).collect::<Result<Vec<_>>>()?;
    WeightedDag::new((width + 1) * (height + 1), edges, o, d)
}

/// The two-taxi street configuration: `o_0 = (1,1)`, `d_0 = (4,3)`,
/// `o_1 = (1,2)`, `d_1 = (3,3)` on a 5×3 block grid.
pub fn two_taxis() -> WeightedDag {
    street_grid(5, 3, &[(1, 1), (1, 2)], &[(4, 3), (3, 3)]).expect("preset is valid")
}

/// Triangular lattice with `diag` diagonal vertices: points `(col, row)` with
/// `0 ≤ col ≤ row < diag`, edges north `(c,r)→(c,r+1)` and east
/// `(c,r)→(c+1,r)` while staying on or above the diagonal. When `doubled`,
/// each northward edge leaving a diagonal vertex has multiplicity 2.
fn triangular_lattice(diag: usize, doubled: bool) -> (usize, Vec<Edge>, Vec<usize>) {
    // Row r holds columns 0..=r; id = r(r+1)/2 + c.
    let id = |c: usize, r: usize| r * (r + 1) / 2 + c;
    let count = diag * (diag + 1) / 2;
    let mut edges = Vec::new();
    for r in 0..diag {
        for c in 0..=r {
            if r + 1 < diag {
                let mult = if doubled && c == r { 2 } else { 1 };
                edges.push(Edge {
                    source: id(c, r),
                    target: id(c, r + 1),
                    weight: Rational::one(),
                    multiplicity: mult,
                });
            }
            if c < r {
                edges.push(Edge { source: id(c, r), target: id(c + 1, r), weight: Rational::one(), multiplicity: 1 });
            }
        }
    }
    let diagonal = (0..diag).map(|i| id(i, i)).collect();
    (count, edges, diagonal)
}

fn diagonal_grid(n: usize, shifted: bool, doubled: bool) -> Result<WeightedDag> {
    if n == 0 {
        return Err(Error::Dimension("grid size must be at least 1".into()));
    }
    let diag = if shifted { 2 * n } else { 2 * n - 1 };
    let (count, edges, dv) = triangular_lattice(diag, doubled);
    let origins = (0..n).map(|i| dv[n - 1 - i]).collect();
    let off = if shifted { n } else { n - 1 };
    let destinations = (0..n).map(|j| dv[off + j]).collect();
    WeightedDag::new(count, edges, origins, destinations)
}

/// Doubled-edge lattice whose path matrix is `B(n)` (or `B'(n)` when shifted).
pub fn grid_binomial(n: usize, shifted: bool) -> Result<WeightedDag> {
    diagonal_grid(n, shifted, true)
}

/// Dyck-path lattice whose path matrix is `C(n)` (or `C'(n)` when shifted).
pub fn grid_catalan(n: usize, shifted: bool) -> Result<WeightedDag> {
    diagonal_grid(n, shifted, false)
}

/// Catalan grid for `n` with origin `o_r` and destination `d_c` removed;
/// its LGV determinant is the `(r, c)` minor of `C(n)`.
pub fn catalan_minor_graph(n: usize, r: usize, c: usize) -> Result<WeightedDag> {
    let g = grid_catalan(n, false)?;
    if r >= n || c >= n {
        return Err(Error::Graph("deleted terminal out of range".into()));
    }
    let o = g.origins().iter().enumerate().filter(|&(i, _)| i != r).map(|(_, &v)| v).collect();
    let d = g.destinations().iter().enumerate().filter(|&(j, _)| j != c).map(|(_, &v)| v).collect();
    g.with_terminals(o, d)
}
