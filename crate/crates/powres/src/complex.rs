//! The power graph `G^r`, its cubes, and the assembled cubical polyhedral
//! cell complex.
//!
//! Vertices of `G^r` are the exponent vectors in `N_r`; a directed edge
//! `[a, b]` exists exactly when `b = a + f_i - f_{tau(i)}` for a unique
//! direction `i`, and the path matrix embeds everything into `Z^q` so each
//! edge is a unit step along a coordinate axis. Cubes are keyed by their
//! sink `b` and direction set `B`, which determine them uniquely.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::monomial::{binomial, enumerate_nr, ExponentVector};
use crate::tree::{path_matrix, PathMatrix, RootedTree};

/// Default cap on the number of cells of an assembled complex; override
/// with the `POWRES_MAX_CELLS` environment variable.
pub const DEFAULT_MAX_CELLS: u64 = 200_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerEdge {
    pub source: usize,
    pub target: usize,
    /// The unique `i` with `target = source + f_i - f_{tau(i)}`.
    pub direction: usize,
}

/// The directed graph `G^r` together with its embedding into `Z^q`.
#[derive(Debug, Clone)]
pub struct PowerGraph {
    pub r: u32,
    pub vertices: Vec<ExponentVector>,
    /// `phi(a)` for each vertex, in vertex order.
    pub coords: Vec<Vec<i64>>,
    pub edges: Vec<PowerEdge>,
    index: HashMap<ExponentVector, usize>,
}

impl PowerGraph {
    pub fn vertex_index(&self, a: &ExponentVector) -> Option<usize> {
        self.index.get(a).copied()
    }
}

pub fn power_graph(tree: &RootedTree, r: u32) -> PowerGraph {
    let q = tree.q();
    let phi = path_matrix(tree);
    let vertices = enumerate_nr(q, r);
    let index: HashMap<ExponentVector, usize> = vertices
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, v)| (v, i))
        .collect();
    let coords = vertices
        .iter()
        .map(|a| phi.apply(&a.entries()[1..]))
        .collect();
    let mut edges = Vec::new();
    for (bi, b) in vertices.iter().enumerate() {
        for i in 1..=q {
            if let Some(a) = b.step(i, tree.tau(i)) {
                let ai = index[&a];
                edges.push(PowerEdge {
                    source: ai,
                    target: bi,
                    direction: i,
                });
            }
        }
    }
    PowerGraph {
        r,
        vertices,
        coords,
        edges,
        index,
    }
}

/// The embedding `phi(a) = Phi * (a_1, ..., a_q)^T`.
pub fn phi(matrix: &PathMatrix, a: &ExponentVector) -> Vec<i64> {
    matrix.apply(&a.entries()[1..])
}

/// A cell of the complex, keyed by its sink `b` in `N_r` and its direction
/// set `B` (sorted ascending, a subset of `supp(b)`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cube {
    pub sink: ExponentVector,
    pub dirs: Vec<usize>,
}

impl Cube {
    pub fn dim(&self) -> usize {
        self.dirs.len()
    }

    /// `a = b - sum_{i in B} (f_i - f_{tau(i)})`, the unique source.
    pub fn source(&self, tree: &RootedTree) -> ExponentVector {
        let mut e: Vec<i64> = self.sink.entries().iter().map(|&x| x as i64).collect();
        for &i in &self.dirs {
            e[i] -= 1;
            e[tree.tau(i)] += 1;
        }
        ExponentVector::new(e.into_iter().map(|x| u32::try_from(x).unwrap()).collect())
    }

    /// All `2^{|B|}` vertex exponent vectors, ordered by subset bitmask of
    /// the ascending direction list (source first, sink last).
    pub fn vertices(&self, tree: &RootedTree) -> Vec<ExponentVector> {
        let source = self.source(tree);
        let k = self.dirs.len();
        let mut out = Vec::with_capacity(1 << k);
        for mask in 0u32..(1 << k) {
            let mut v = source.clone();
            for (pos, &i) in self.dirs.iter().enumerate() {
                if mask & (1 << pos) != 0 {
                    v = v.step(tree.tau(i), i).expect("cube vertex in N_r");
                }
            }
            out.push(v);
        }
        out
    }

    /// Translation by `phi(f_j)`: `t_j(C(b, B)) = C(b + f_j, B)`.
    pub fn translate(&self, j: usize) -> Cube {
        Cube {
            sink: self.sink.plus_f(j),
            dirs: self.dirs.clone(),
        }
    }
}

/// Builds the cube `C(b, B)`, rejecting `B` not contained in `supp(b)`.
pub fn cube(tree: &RootedTree, b: ExponentVector, dirs: Vec<usize>) -> Result<Cube> {
    let supp = b.support();
    let mut dirs = dirs;
    dirs.sort_unstable();
    dirs.dedup();
    for &i in &dirs {
        if !supp.contains(&i) {
            return Err(Error::InvalidCube(format!(
                "direction {i} not in supp({b}) of tree with q = {}",
                tree.q()
            )));
        }
    }
    Ok(Cube { sink: b, dirs })
}

/// The `2|B|` codimension-one faces with the sign convention of the
/// oriented chain complex: for the `k`-th direction `j` (1-based, ascending
/// order), `C(b, B \ {j})` carries `(-1)^{k+1}` and
/// `C(b - f_j + f_{tau(j)}, B \ {j})` carries `(-1)^k`.
pub fn faces(cube: &Cube, tree: &RootedTree) -> Vec<(i64, Cube)> {
    let mut out = Vec::with_capacity(2 * cube.dirs.len());
    for (k0, &j) in cube.dirs.iter().enumerate() {
        let sign = if k0 % 2 == 0 { 1 } else { -1 };
        let rest: Vec<usize> = cube.dirs.iter().copied().filter(|&x| x != j).collect();
        out.push((
            sign,
            Cube {
                sink: cube.sink.clone(),
                dirs: rest.clone(),
            },
        ));
        let shifted = cube
            .sink
            .step(j, tree.tau(j))
            .expect("face sink stays in N_r");
        out.push((
            -sign,
            Cube {
                sink: shifted,
                dirs: rest,
            },
        ));
    }
    out
}

/// Checks whether `face` is a face of `cube` per the subset
/// characterization: `face = C(c, B \ C)` with
/// `c = b - sum_{i in C'} (f_i - f_{tau(i)})` for some `C' subseteq C`.
pub fn is_face_of(face: &Cube, cube: &Cube, tree: &RootedTree) -> bool {
    if !face.dirs.iter().all(|d| cube.dirs.contains(d)) {
        return false;
    }
    let dropped: Vec<usize> = cube
        .dirs
        .iter()
        .copied()
        .filter(|d| !face.dirs.contains(d))
        .collect();
    let k = dropped.len();
    for mask in 0u32..(1 << k) {
        let mut c = cube.sink.clone();
        let mut ok = true;
        for (pos, &i) in dropped.iter().enumerate() {
            if mask & (1 << pos) != 0 {
                match c.step(i, tree.tau(i)) {
                    Some(next) => c = next,
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
        }
        if ok && c == face.sink {
            return true;
        }
    }
    false
}

/// The assembled complex: all cubes `C(b, B)` for `b in N_r`,
/// `B subseteq supp(b)`, grouped by dimension in the canonical order
/// (sink in `N_r` order, then `B` lexicographic).
#[derive(Debug, Clone)]
pub struct CellComplex {
    tree: RootedTree,
    r: u32,
    cells: Vec<Vec<Cube>>,
    index: HashMap<Cube, (usize, usize)>,
}

impl CellComplex {
    pub fn tree(&self) -> &RootedTree {
        &self.tree
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    /// Cells grouped by dimension `0..=min(q, r)`.
    pub fn cells(&self) -> &[Vec<Cube>] {
        &self.cells
    }

    pub fn max_dim(&self) -> usize {
        self.cells.len() - 1
    }

    pub fn f_vector(&self) -> Vec<u64> {
        self.cells.iter().map(|c| c.len() as u64).collect()
    }

    pub fn total_cells(&self) -> u64 {
        self.cells.iter().map(|c| c.len() as u64).sum()
    }

    /// `(dimension, position)` of a cube, if present.
    pub fn position(&self, cube: &Cube) -> Option<(usize, usize)> {
        self.index.get(cube).copied()
    }

    pub fn contains(&self, cube: &Cube) -> bool {
        self.index.contains_key(cube)
    }

    /// Reassembles the index; used when reconstructing from serialized cells.
    pub fn from_parts(tree: RootedTree, r: u32, cells: Vec<Vec<Cube>>) -> Self {
        let mut index = HashMap::new();
        for (dim, layer) in cells.iter().enumerate() {
            for (pos, c) in layer.iter().enumerate() {
                index.insert(c.clone(), (dim, pos));
            }
        }
        CellComplex {
            tree,
            r,
            cells,
            index,
        }
    }
}

fn max_cells_limit() -> u64 {
    std::env::var("POWRES_MAX_CELLS")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_MAX_CELLS)
}

/// Expected number of `t`-cells: `C(q, t) * C(q + r - t, r - t)`.
pub fn cell_count_formula(q: usize, r: u32, t: usize) -> u64 {
    if t > r as usize || t > q {
        return 0;
    }
    binomial(q as u64, t as u64)
        * binomial(q as u64 + r as u64 - t as u64, r as u64 - t as u64)
}

pub fn assemble_complex(tree: &RootedTree, r: u32) -> Result<CellComplex> {
    assemble_complex_limited(tree, r, max_cells_limit())
}

/// [`assemble_complex`] with an explicit cell cap instead of the
/// environment-derived one.
pub fn assemble_complex_limited(tree: &RootedTree, r: u32, limit: u64) -> Result<CellComplex> {
    let q = tree.q();
    let max_dim = q.min(r as usize);
    let predicted: u64 = (0..=max_dim).map(|t| cell_count_formula(q, r, t)).sum();
    if predicted > limit {
        return Err(Error::Resource {
            cells: predicted,
            limit,
        });
    }

    let vertices = enumerate_nr(q, r);
    let mut cells: Vec<Vec<Cube>> = vec![Vec::new(); max_dim + 1];
    for b in &vertices {
        let supp = b.support();
        for (t, layer) in cells.iter_mut().enumerate().take(supp.len().min(max_dim) + 1) {
            for dirs in combinations(&supp, t) {
                layer.push(Cube {
                    sink: b.clone(),
                    dirs,
                });
            }
        }
    }
    // Canonical order within a dimension: sink in N_r order first. The loop
    // above iterates sinks in order but groups by sink; re-sort by (sink
    // position, dirs) to pin the documented order.
    let pos: HashMap<ExponentVector, usize> = vertices
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, v)| (v, i))
        .collect();
    for layer in cells.iter_mut() {
        layer.sort_by(|a, b| pos[&a.sink].cmp(&pos[&b.sink]).then(a.dirs.cmp(&b.dirs)));
    }
    Ok(CellComplex::from_parts(tree.clone(), r, cells))
}

/// Size-`t` subsets of `items` in lexicographic order.
fn combinations(items: &[usize], t: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(t);
    fn rec(items: &[usize], start: usize, t: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == t {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            rec(items, i + 1, t, cur, out);
            cur.pop();
        }
    }
    rec(items, 0, t, &mut cur, &mut out);
    out
}

/// Verifies that the induced directed subgraph of `G^r` on the cube's
/// vertices has the claimed unique source and unique sink.
pub fn check_source_sink(cube: &Cube, tree: &RootedTree) -> bool {
    let verts: HashSet<ExponentVector> = cube.vertices(tree).into_iter().collect();
    let mut sources = Vec::new();
    let mut sinks = Vec::new();
    for v in &verts {
        let mut has_in = false;
        let mut has_out = false;
        for i in 1..=tree.q() {
            // incoming edge u -> v exists iff u = v - f_i + f_{tau(i)} is a vertex
            if let Some(u) = v.step(i, tree.tau(i)) {
                if verts.contains(&u) {
                    has_in = true;
                }
            }
            // outgoing edge v -> w exists iff w = v + f_i - f_{tau(i)} is a vertex
            if let Some(w) = v.step(tree.tau(i), i) {
                if verts.contains(&w) {
                    has_out = true;
                }
            }
        }
        if !has_in {
            sources.push(v.clone());
        }
        if !has_out {
            sinks.push(v.clone());
        }
    }
    if cube.dim() == 0 {
        return sources.len() == 1 && sinks.len() == 1 && sources[0] == cube.sink;
    }
    sources == vec![cube.source(tree)] && sinks == vec![cube.sink.clone()]
}

/// Report of the polyhedral-cell-complex property: every pairwise cell
/// intersection must be a common face.
#[derive(Debug, Clone)]
pub struct PolyhedralReport {
    pub pairs_checked: u64,
    pub violations: Vec<(Cube, Cube)>,
}

impl PolyhedralReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn validate_polyhedral(cx: &CellComplex) -> PolyhedralReport {
    let tree = cx.tree();
    let all: Vec<&Cube> = cx.cells().iter().flatten().collect();
    let vert_sets: Vec<HashSet<ExponentVector>> = all
        .iter()
        .map(|c| c.vertices(tree).into_iter().collect())
        .collect();
    let mut pairs_checked = 0;
    let mut violations = Vec::new();
    for i in 0..all.len() {
        for j in (i + 1)..all.len() {
            pairs_checked += 1;
            if !pair_intersection_is_common_face(all[i], all[j], &vert_sets[i], &vert_sets[j], cx) {
                violations.push((all[i].clone(), all[j].clone()));
            }
        }
    }
    PolyhedralReport {
        pairs_checked,
        violations,
    }
}

fn pair_intersection_is_common_face(
    c1: &Cube,
    c2: &Cube,
    v1: &HashSet<ExponentVector>,
    v2: &HashSet<ExponentVector>,
    cx: &CellComplex,
) -> bool {
    let tree = cx.tree();
    let inter: HashSet<&ExponentVector> = v1.intersection(v2).collect();
    if inter.is_empty() {
        // The empty set is the (-1)-cell, a face of everything.
        return true;
    }
    // For each intersection vertex, the subset A of B with
    // v = b - sum_{j in A} (f_j - f_{tau(j)}); B_0 is the intersection of
    // those subsets, and likewise D_0 inside c2.
    let b0 = match minimal_subset(c1, &inter, tree) {
        Some(s) => s,
        None => return false,
    };
    let d0 = match minimal_subset(c2, &inter, tree) {
        Some(s) => s,
        None => return false,
    };
    let mut c = c1.sink.clone();
    for &j in &b0 {
        c = match c.step(j, tree.tau(j)) {
            Some(next) => next,
            None => return false,
        };
    }
    let dirs: Vec<usize> = c1
        .dirs
        .iter()
        .copied()
        .filter(|d| !b0.contains(d))
        .filter(|d| c2.dirs.contains(d) && !d0.contains(d))
        .collect();
    let candidate = Cube { sink: c, dirs };
    let cand_verts: HashSet<ExponentVector> = candidate.vertices(tree).into_iter().collect();
    let inter_owned: HashSet<ExponentVector> = inter.into_iter().cloned().collect();
    cand_verts == inter_owned
        && cx.contains(&candidate)
        && is_face_of(&candidate, c1, tree)
        && is_face_of(&candidate, c2, tree)
}

/// Intersection of all direction subsets realizing intersection vertices of
/// `cube`; `None` if some intersection vertex is not a vertex of `cube`.
fn minimal_subset(
    cube: &Cube,
    inter: &HashSet<&ExponentVector>,
    tree: &RootedTree,
) -> Option<Vec<usize>> {
    let k = cube.dirs.len();
    // Map vertex -> dropped-direction subset (the A with
    // v = b - sum_{j in A} (f_j - f_{tau(j)})).
    let mut by_vertex: HashMap<ExponentVector, Vec<usize>> = HashMap::new();
    for mask in 0u32..(1 << k) {
        let mut v = cube.sink.clone();
        let mut dropped = Vec::new();
        for (pos, &i) in cube.dirs.iter().enumerate() {
            if mask & (1 << pos) != 0 {
                v = v.step(i, tree.tau(i))?;
                dropped.push(i);
            }
        }
        by_vertex.insert(v, dropped);
    }
    let mut acc: Option<Vec<usize>> = None;
    for v in inter {
        let a = by_vertex.get(*v)?;
        acc = Some(match acc {
            None => a.clone(),
            Some(prev) => prev.into_iter().filter(|x| a.contains(x)).collect(),
        });
    }
    acc
}

/// Verifies that every cube of `G^{r+1}` is a translate `t_i` of a cube of
/// `G^r`; requires `r >= q`.
pub fn covering_check(tree: &RootedTree, r: u32) -> Result<bool> {
    let q = tree.q();
    if (r as usize) < q {
        return Err(Error::CoveringPrecondition { r, q });
    }
    let lower = assemble_complex(tree, r)?;
    let upper = assemble_complex(tree, r + 1)?;
    for layer in upper.cells() {
        for cube in layer {
            let mut covered = false;
            for i in 0..=q {
                if let Some(smaller_sink) = cube.sink.minus_f(i) {
                    let support_ok = cube
                        .dirs
                        .iter()
                        .all(|&j| smaller_sink.get(j) >= 1);
                    if support_ok {
                        let smaller = Cube {
                            sink: smaller_sink,
                            dirs: cube.dirs.clone(),
                        };
                        if lower.contains(&smaller) && smaller.translate(i) == *cube {
                            covered = true;
                            break;
                        }
                    }
                }
            }
            if !covered {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monomial::parse_ideal;
    use crate::tree::build_support_tree;

    fn ev(v: &[u32]) -> ExponentVector {
        ExponentVector::new(v.to_vec())
    }

    fn running_tree() -> RootedTree {
        build_support_tree(&parse_ideal("x*y, y*z, z*u").unwrap()).unwrap()
    }

    /// Path on 4 vertices labeled with the complement ideal on a,b,c,d.
    fn path4_tree() -> RootedTree {
        let ideal = parse_ideal("b*c*d, a*c*d, a*b*d, a*b*c").unwrap();
        RootedTree::new(
            ideal.ring().clone(),
            ideal.generators().to_vec(),
            vec![0, 1, 2],
        )
        .unwrap()
    }

    #[test]
    fn power_graph_square_example() {
        // Path tree on 4 vertices, r = 2: 10 vertices and 12 edges.
        let g = power_graph(&path4_tree(), 2);
        assert_eq!(g.vertices.len(), 10);
        assert_eq!(g.edges.len(), 12);
    }

    #[test]
    fn power_graph_r1_is_the_tree() {
        let tree = running_tree();
        let g = power_graph(&tree, 1);
        assert_eq!(g.vertices.len(), 3);
        assert_eq!(g.edges.len(), 2);
        for e in &g.edges {
            // Each r = 1 edge is a tree edge f_{tau(i)} -> f_i.
            assert_eq!(g.vertices[e.target], ev(&[0, 0, 0]).plus_f(e.direction));
        }
    }

    #[test]
    fn phi_coordinates_of_running_example() {
        let tree = running_tree();
        let g = power_graph(&tree, 2);
        let coords: Vec<Vec<i64>> = g.coords.clone();
        assert_eq!(
            coords,
            vec![
                vec![0, 0],
                vec![1, 0],
                vec![1, 1],
                vec![2, 0],
                vec![2, 1],
                vec![2, 2],
            ]
        );
        assert_eq!(g.coords[g.vertex_index(&ev(&[0, 1, 1])).unwrap()], vec![2, 1]);
    }

    #[test]
    fn phi_injective_on_nr() {
        for (tree, rmax) in [(running_tree(), 5u32), (path4_tree(), 4u32)] {
            for r in 1..=rmax {
                let g = power_graph(&tree, r);
                let set: HashSet<Vec<i64>> = g.coords.iter().cloned().collect();
                assert_eq!(set.len(), g.vertices.len());
            }
        }
    }

    #[test]
    fn edge_tri_equivalence() {
        // Three independent edge characterizations must agree: the graph
        // product definition, the f_i - f_{tau(i)} step, and the phi step.
        let tree = running_tree();
        let q = tree.q();
        for r in 1..=4u32 {
            let g = power_graph(&tree, r);
            let phi_m = path_matrix(&tree);
            let mut step_edges = HashSet::new();
            for e in &g.edges {
                step_edges.insert((e.source, e.target, e.direction));
            }
            // Route 1: a = c + f_{tau(i)}, b = c + f_i for c in N_{r-1}.
            let mut product_edges = HashSet::new();
            for c in enumerate_nr(q, r - 1) {
                for i in 1..=q {
                    let a = c.plus_f(tree.tau(i));
                    let b = c.plus_f(i);
                    product_edges.insert((
                        g.vertex_index(&a).unwrap(),
                        g.vertex_index(&b).unwrap(),
                        i,
                    ));
                }
            }
            assert_eq!(step_edges, product_edges);
            // Route 3: phi(b) = phi(a) + e_i.
            for &(ai, bi, i) in &step_edges {
                let pa = phi(&phi_m, &g.vertices[ai]);
                let pb = phi(&phi_m, &g.vertices[bi]);
                let mut expected = pa.clone();
                expected[i - 1] += 1;
                assert_eq!(pb, expected);
            }
        }
    }

    #[test]
    fn cube_of_example_square() {
        let tree = running_tree();
        let c = cube(&tree, ev(&[0, 1, 1]), vec![1, 2]).unwrap();
        assert_eq!(c.source(&tree), ev(&[1, 1, 0]));
        let phi_m = path_matrix(&tree);
        assert_eq!(phi(&phi_m, &c.source(&tree)), vec![1, 0]);
        assert_eq!(phi(&phi_m, &c.sink), vec![2, 1]);
        let verts: HashSet<ExponentVector> = c.vertices(&tree).into_iter().collect();
        assert_eq!(verts.len(), 4);
        assert!(verts.contains(&ev(&[1, 0, 1])));
    }

    #[test]
    fn cube_top_edge() {
        let tree = running_tree();
        let c = cube(&tree, ev(&[0, 1, 1]), vec![1]).unwrap();
        assert_eq!(c.source(&tree), ev(&[1, 0, 1]));
        let phi_m = path_matrix(&tree);
        assert_eq!(phi(&phi_m, &c.source(&tree)), vec![1, 1]);
    }

    #[test]
    fn cube_zero_dimensional() {
        let tree = running_tree();
        let c = cube(&tree, ev(&[1, 1, 0]), vec![]).unwrap();
        assert_eq!(c.dim(), 0);
        assert_eq!(c.vertices(&tree), vec![ev(&[1, 1, 0])]);
    }

    #[test]
    fn cube_rejects_bad_directions() {
        let tree = running_tree();
        assert!(cube(&tree, ev(&[2, 0, 0]), vec![1]).is_err());
    }

    #[test]
    fn faces_of_square_match_example() {
        let tree = running_tree();
        let c = cube(&tree, ev(&[0, 1, 1]), vec![1, 2]).unwrap();
        let fs = faces(&c, &tree);
        // d(u_c) = u_{c2} + u_{c4} - u_{c3} - u_{c5}
        let c2 = cube(&tree, ev(&[0, 2, 0]), vec![1]).unwrap();
        let c3 = cube(&tree, ev(&[0, 1, 1]), vec![1]).unwrap();
        let c4 = cube(&tree, ev(&[0, 1, 1]), vec![2]).unwrap();
        let c5 = cube(&tree, ev(&[1, 0, 1]), vec![2]).unwrap();
        let signed: HashMap<Cube, i64> = fs.into_iter().map(|(s, f)| (f, s)).collect();
        assert_eq!(signed[&c2], 1);
        assert_eq!(signed[&c4], 1);
        assert_eq!(signed[&c3], -1);
        assert_eq!(signed[&c5], -1);
    }

    #[test]
    fn faces_of_edge_are_endpoints() {
        let tree = running_tree();
        let c = cube(&tree, ev(&[0, 1, 1]), vec![1]).unwrap();
        let fs = faces(&c, &tree);
        assert_eq!(fs.len(), 2);
        assert_eq!(fs[0].0, 1);
        assert_eq!(fs[0].1.sink, ev(&[0, 1, 1]));
        assert_eq!(fs[1].0, -1);
        assert_eq!(fs[1].1.sink, ev(&[1, 0, 1]));
    }

    #[test]
    fn iterated_faces_of_a_3_cube() {
        // In the 4-vertex path tree at r = 3 there is a 3-cube; its closure
        // has 8 vertices, 12 edges, 6 squares.
        let tree = path4_tree();
        let top = cube(&tree, ev(&[0, 1, 1, 1]), vec![1, 2, 3]).unwrap();
        let mut by_dim: Vec<HashSet<Cube>> = vec![HashSet::new(); 4];
        by_dim[3].insert(top.clone());
        for d in (1..=3usize).rev() {
            let current: Vec<Cube> = by_dim[d].iter().cloned().collect();
            for c in current {
                for (_, f) in faces(&c, &tree) {
                    by_dim[d - 1].insert(f);
                }
            }
        }
        assert_eq!(by_dim[2].len(), 6);
        assert_eq!(by_dim[1].len(), 12);
        assert_eq!(by_dim[0].len(), 8);
        let cx = assemble_complex(&tree, 3).unwrap();
        for layer in &by_dim {
            for f in layer {
                assert!(cx.contains(f));
            }
        }
    }

    #[test]
    fn assemble_f_vectors() {
        let tree = running_tree();
        assert_eq!(assemble_complex(&tree, 2).unwrap().f_vector(), vec![6, 6, 1]);
        assert_eq!(assemble_complex(&tree, 1).unwrap().f_vector(), vec![3, 2]);
        assert_eq!(
            assemble_complex(&tree, 3).unwrap().f_vector(),
            vec![10, 12, 3]
        );
    }

    #[test]
    fn cell_count_formula_matches_enumeration() {
        for (tree, rmax) in [(running_tree(), 5u32), (path4_tree(), 4u32)] {
            for r in 1..=rmax {
                let cx = assemble_complex(&tree, r).unwrap();
                for (t, count) in cx.f_vector().iter().enumerate() {
                    assert_eq!(*count, cell_count_formula(tree.q(), r, t));
                }
            }
        }
    }

    #[test]
    fn source_sink_unique_per_cube() {
        let tree = path4_tree();
        let cx = assemble_complex(&tree, 3).unwrap();
        for layer in cx.cells() {
            for c in layer {
                assert!(check_source_sink(c, &tree));
            }
        }
    }

    #[test]
    fn polyhedral_property_small_cases() {
        let tree = running_tree();
        for r in 1..=3u32 {
            let cx = assemble_complex(&tree, r).unwrap();
            let report = validate_polyhedral(&cx);
            assert!(report.ok(), "violations: {:?}", report.violations);
        }
    }

    #[test]
    fn adjacent_squares_intersect_in_an_edge() {
        let tree = running_tree();
        let cx = assemble_complex(&tree, 3).unwrap();
        let s1 = cube(&tree, ev(&[0, 1, 2]), vec![1, 2]).unwrap();
        let s2 = cube(&tree, ev(&[0, 2, 1]), vec![1, 2]).unwrap();
        assert!(cx.contains(&s1) && cx.contains(&s2));
        let v1: HashSet<ExponentVector> = s1.vertices(&tree).into_iter().collect();
        let v2: HashSet<ExponentVector> = s2.vertices(&tree).into_iter().collect();
        let inter: HashSet<&ExponentVector> = v1.intersection(&v2).collect();
        assert_eq!(inter.len(), 2);
        assert!(pair_intersection_is_common_face(&s1, &s2, &v1, &v2, &cx));
    }

    #[test]
    fn single_cube_complex_is_polyhedral() {
        let ideal = parse_ideal("x, y").unwrap();
        let tree = build_support_tree(&ideal).unwrap();
        let cx = assemble_complex(&tree, 1).unwrap();
        assert!(validate_polyhedral(&cx).ok());
    }

    #[test]
    fn translate_square() {
        let tree = running_tree();
        let c = cube(&tree, ev(&[0, 1, 1]), vec![1, 2]).unwrap();
        let t2 = c.translate(2);
        assert_eq!(t2.sink, ev(&[0, 1, 2]));
        assert_eq!(t2.dirs, vec![1, 2]);
        // t_0 only bumps a_0 (the embedding normalization).
        let t0 = c.translate(0);
        assert_eq!(t0.sink, ev(&[1, 1, 1]));
    }

    #[test]
    fn covering_check_running_example() {
        let tree = running_tree();
        assert!(covering_check(&tree, 2).unwrap());
        assert!(matches!(
            covering_check(&tree, 1),
            Err(Error::CoveringPrecondition { r: 1, q: 2 })
        ));
    }

    #[test]
    fn guardrail_rejects_huge_instances() {
        // The env-variable override is exercised end to end in the CLI
        // tests; here the limit is passed explicitly to stay thread-safe.
        let tree = path4_tree();
        let err = assemble_complex_limited(&tree, 3, 5);
        assert!(matches!(err, Err(Error::Resource { cells: 63, limit: 5 })));
    }
}
