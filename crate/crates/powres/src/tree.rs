//! Rooted labeled trees supporting minimal free resolutions of
//! projective-dimension-one ideals, their path-incidence matrix, and the
//! exhaustive spanning-tree search.

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::monomial::{Monomial, MonomialIdeal, Ring};

/// A tree on `q + 1` monomial-labeled vertices with the increasing labeling:
/// vertex `0` is the root and every other vertex `i` has parent `tau(i) < i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootedTree {
    ring: Ring,
    labels: Vec<Monomial>,
    /// `parent[i - 1] = tau(i)` for `i` in `1..=q`.
    parent: Vec<usize>,
}

impl RootedTree {
    pub fn new(ring: Ring, labels: Vec<Monomial>, parent: Vec<usize>) -> Result<Self> {
        if labels.len() != parent.len() + 1 {
            return Err(Error::NotATree(format!(
                "{} labels for {} edges",
                labels.len(),
                parent.len()
            )));
        }
        for (k, &p) in parent.iter().enumerate() {
            let i = k + 1;
            if p >= i {
                return Err(Error::NotATree(format!(
                    "parent of vertex {i} is {p}, violating tau(i) < i"
                )));
            }
        }
        for l in &labels {
            assert_eq!(l.n(), ring.n(), "ring mismatch");
        }
        Ok(RootedTree { ring, labels, parent })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    /// Number of edges `q`; the tree has `q + 1` vertices.
    pub fn q(&self) -> usize {
        self.parent.len()
    }

    pub fn labels(&self) -> &[Monomial] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &Monomial {
        &self.labels[i]
    }

    /// `tau(i)` for `i` in `1..=q`.
    pub fn tau(&self, i: usize) -> usize {
        self.parent[i - 1]
    }

    /// Edge label `lcm(m_i, m_{tau(i)})`.
    pub fn edge_label(&self, i: usize) -> Monomial {
        self.labels[i].lcm(&self.labels[self.tau(i)])
    }

    /// The ideal generated by the vertex labels, in vertex order.
    pub fn ideal(&self) -> Result<MonomialIdeal> {
        MonomialIdeal::new(self.ring.clone(), self.labels.clone())
    }

    pub fn to_unrooted(&self) -> UnrootedTree {
        UnrootedTree {
            ring: self.ring.clone(),
            labels: self.labels.clone(),
            edges: (1..=self.q()).map(|i| (self.tau(i), i)).collect(),
        }
    }
}

/// A tree given as monomial-labeled vertices plus undirected edges, prior to
/// the rooted relabeling.
#[derive(Debug, Clone)]
pub struct UnrootedTree {
    pub ring: Ring,
    pub labels: Vec<Monomial>,
    pub edges: Vec<(usize, usize)>,
}

/// Relabels the vertices `0..=q` by breadth-first traversal from `root`,
/// with ties broken by lexicographic order on the vertex monomials.
///
/// The output satisfies `tau(i) < i` and is stable: applying the operation
/// again (rooted at vertex 0) reproduces the same labeling.
pub fn root_and_label(tree: &UnrootedTree, root: usize) -> Result<RootedTree> {
    let n = tree.labels.len();
    if tree.edges.len() + 1 != n {
        return Err(Error::NotATree(format!(
            "{} edges on {} vertices",
            tree.edges.len(),
            n
        )));
    }
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(u, v) in &tree.edges {
        if u == v {
            return Err(Error::NotATree(format!("loop at vertex {u}")));
        }
        adj[u].push(v);
        adj[v].push(u);
    }

    let mut order = Vec::with_capacity(n);
    let mut new_index = vec![usize::MAX; n];
    let mut parent_of = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    queue.push_back(root);
    new_index[root] = 0;
    order.push(root);
    while let Some(v) = queue.pop_front() {
        let mut children: Vec<usize> = adj[v]
            .iter()
            .copied()
            .filter(|&u| new_index[u] == usize::MAX)
            .collect();
        children.sort_by(|&a, &b| {
            tree.labels[a]
                .exponents()
                .cmp(tree.labels[b].exponents())
                .then(a.cmp(&b))
        });
        for c in children {
            new_index[c] = order.len();
            parent_of[c] = new_index[v];
            order.push(c);
            queue.push_back(c);
        }
    }
    if order.len() != n {
        let missing: Vec<usize> = (0..n).filter(|&v| new_index[v] == usize::MAX).collect();
        return Err(Error::NotATree(format!(
            "disconnected: vertices {missing:?} unreachable from root {root}"
        )));
    }

    let labels = order.iter().map(|&v| tree.labels[v].clone()).collect();
    let parent = order[1..].iter().map(|&v| parent_of[v]).collect();
    RootedTree::new(tree.ring.clone(), labels, parent)
}

/// The q x q vertex-path incidence matrix: entry `(i, j)` is 1 iff edge
/// `e_i` lies on the unique path from the root to `v_j`. Always upper
/// triangular with unit diagonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathMatrix {
    entries: Vec<Vec<u8>>,
}

impl PathMatrix {
    pub fn q(&self) -> usize {
        self.entries.len()
    }

    /// Row-major entries, rows indexed by edges `e_1..e_q`, columns by
    /// vertices `v_1..v_q`.
    pub fn rows(&self) -> &[Vec<u8>] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.entries[i - 1][j - 1]
    }

    /// `Phi * (a_1, ..., a_q)^T`, the embedding coordinate of an exponent
    /// vector (its `a_0` entry is ignored).
    pub fn apply(&self, tail: &[u32]) -> Vec<i64> {
        let q = self.q();
        assert_eq!(tail.len(), q);
        (0..q)
            .map(|row| {
                (0..q)
                    .map(|col| self.entries[row][col] as i64 * tail[col] as i64)
                    .sum()
            })
            .collect()
    }
}

/// Column recurrence from the tree structure: column `i` of `Phi` is column
/// `tau(i)` plus the `i`-th standard basis column, with column 0 read as 0.
pub fn path_matrix(tree: &RootedTree) -> PathMatrix {
    let q = tree.q();
    let mut cols: Vec<Vec<u8>> = vec![vec![0; q]; q + 1];
    for i in 1..=q {
        let mut col = cols[tree.tau(i)].clone();
        col[i - 1] = 1;
        cols[i] = col;
    }
    let entries = (0..q)
        .map(|row| (1..=q).map(|j| cols[j][row]).collect())
        .collect();
    PathMatrix { entries }
}

/// Outcome of checking that a labeled tree supports the minimal free
/// resolution of its ideal.
#[derive(Debug, Clone)]
pub struct SupportReport {
    /// Edges `e_i` with `lcm(m_i, m_{tau(i)})` equal to one of its endpoints.
    pub non_minimal_edges: Vec<usize>,
    /// Multidegrees of the lcm lattice at which the induced subgraph is
    /// disconnected.
    pub disconnected_at: Vec<Monomial>,
    /// Number of lattice multidegrees examined.
    pub multidegrees_checked: usize,
}

impl SupportReport {
    pub fn supports_minimal_resolution(&self) -> bool {
        self.non_minimal_edges.is_empty() && self.disconnected_at.is_empty()
    }
}

/// All lcms of nonempty subsets of `gens`, deduplicated.
pub fn lcm_lattice(gens: &[Monomial]) -> Vec<Monomial> {
    let mut lattice: BTreeSet<Monomial> = BTreeSet::new();
    let n = gens.len();
    assert!(n < 63, "lcm lattice enumeration limited to < 63 generators");
    for mask in 1u64..(1u64 << n) {
        let mut acc: Option<Monomial> = None;
        for (i, g) in gens.iter().enumerate() {
            if mask & (1 << i) != 0 {
                acc = Some(match acc {
                    None => g.clone(),
                    Some(a) => a.lcm(g),
                });
            }
        }
        lattice.insert(acc.unwrap());
    }
    lattice.into_iter().collect()
}

/// Checks the acyclicity criterion for a tree-supported complex: for every
/// multidegree in the lcm lattice, the induced subgraph on vertices whose
/// label divides it must be connected or empty. Also checks edge minimality.
pub fn validate_support(tree: &RootedTree, ideal: &MonomialIdeal) -> Result<SupportReport> {
    let mut tree_set: Vec<&Monomial> = tree.labels().iter().collect();
    let mut ideal_set: Vec<&Monomial> = ideal.generators().iter().collect();
    tree_set.sort();
    ideal_set.sort();
    if tree_set != ideal_set {
        return Err(Error::LabelMismatch(
            "vertex labels are not the ideal's generators".into(),
        ));
    }

    let mut non_minimal_edges = Vec::new();
    for i in 1..=tree.q() {
        let e = tree.edge_label(i);
        if e == *tree.label(i) || e == *tree.label(tree.tau(i)) {
            non_minimal_edges.push(i);
        }
    }

    let lattice = lcm_lattice(tree.labels());
    let mut disconnected_at = Vec::new();
    for b in &lattice {
        if !subgraph_connected_or_empty(tree, b) {
            disconnected_at.push(b.clone());
        }
    }

    Ok(SupportReport {
        non_minimal_edges,
        multidegrees_checked: lattice.len(),
        disconnected_at,
    })
}

fn subgraph_connected_or_empty(tree: &RootedTree, b: &Monomial) -> bool {
    let q = tree.q();
    let present: Vec<bool> = (0..=q).map(|v| tree.label(v).divides(b)).collect();
    let start = match (0..=q).find(|&v| present[v]) {
        None => return true,
        Some(v) => v,
    };
    // Edges of the induced subgraph are the tree edges with both endpoints
    // present; the edge label (lcm of endpoints) then divides b as well.
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); q + 1];
    for i in 1..=q {
        let t = tree.tau(i);
        if present[i] && present[t] {
            adj[i].push(t);
            adj[t].push(i);
        }
    }
    let mut seen = vec![false; q + 1];
    let mut stack = vec![start];
    seen[start] = true;
    while let Some(v) = stack.pop() {
        for &u in &adj[v] {
            if !seen[u] {
                seen[u] = true;
                stack.push(u);
            }
        }
    }
    (0..=q).all(|v| !present[v] || seen[v])
}

/// Decodes a Pruefer sequence over `n` vertices into the edge list of the
/// corresponding labeled tree. An empty sequence yields the single edge on
/// two vertices.
pub fn prufer_decode(seq: &[usize], n: usize) -> Vec<(usize, usize)> {
    assert!(n >= 2 && seq.len() == n - 2);
    let mut degree = vec![1u32; n];
    for &s in seq {
        degree[s] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &s in seq {
        let leaf = (0..n).find(|&v| degree[v] == 1).unwrap();
        edges.push((leaf, s));
        degree[leaf] = 0;
        degree[s] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    edges
}

/// Finds a rooted labeled tree supporting the minimal free resolution of a
/// square-free ideal by exhaustive search over spanning trees of the
/// complete graph on the generators (Pruefer sequences in lexicographic
/// order, roots in vertex order). Deterministic: first success wins.
pub fn build_support_tree(ideal: &MonomialIdeal) -> Result<RootedTree> {
    if !ideal.is_squarefree() {
        return Err(Error::NotSquarefree);
    }
    let q = ideal.q();
    let n = ideal.ring().n();
    if q + 1 > n {
        return Err(Error::TooManyGenerators { q_plus_1: q + 1, n });
    }
    if q == 0 {
        return RootedTree::new(
            ideal.ring().clone(),
            ideal.generators().to_vec(),
            Vec::new(),
        );
    }

    let gens = ideal.generators();
    // Pairwise lcms, used by the path-divisibility prefilter.
    let mut pair_lcm: HashMap<(usize, usize), Monomial> = HashMap::new();
    for u in 0..=q {
        for w in (u + 1)..=q {
            pair_lcm.insert((u, w), gens[u].lcm(&gens[w]));
        }
    }

    let mut first_failure: Option<String> = None;
    let vertices = q + 1;
    let seq_len = vertices - 2;
    let mut seq = vec![0usize; seq_len];
    loop {
        let edges = prufer_decode(&seq, vertices);
        if tree_passes_path_filter(&edges, gens, &pair_lcm, vertices) {
            for root in 0..vertices {
                let candidate = root_and_label(
                    &UnrootedTree {
                        ring: ideal.ring().clone(),
                        labels: gens.to_vec(),
                        edges: edges.clone(),
                    },
                    root,
                )?;
                let report = validate_support(&candidate, ideal)?;
                if report.supports_minimal_resolution() {
                    return Ok(candidate);
                }
                if first_failure.is_none() {
                    first_failure = Some(describe_failure(ideal.ring(), &report));
                }
            }
        } else if first_failure.is_none() {
            first_failure = Some(path_filter_witness(&edges, gens, &pair_lcm, ideal.ring()));
        }
        if !next_sequence(&mut seq, vertices) {
            break;
        }
    }

    Err(Error::NotPdOne {
        witness: first_failure.unwrap_or_else(|| "no spanning tree candidates".into()),
    })
}

/// Root-independent support criterion: for every pair of vertices, every
/// vertex on the tree path between them must divide the lcm of the
/// endpoints' labels. Equivalent to lattice connectivity, but O(q^3).
fn tree_passes_path_filter(
    edges: &[(usize, usize)],
    gens: &[Monomial],
    pair_lcm: &HashMap<(usize, usize), Monomial>,
    n: usize,
) -> bool {
    path_filter_violation(edges, gens, pair_lcm, n).is_none()
}

fn path_filter_violation(
    edges: &[(usize, usize)],
    gens: &[Monomial],
    pair_lcm: &HashMap<(usize, usize), Monomial>,
    n: usize,
) -> Option<(usize, usize, usize)> {
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    for u in 0..n {
        for w in (u + 1)..n {
            let lcm = &pair_lcm[&(u, w)];
            for k in tree_path(&adj, u, w) {
                if k != u && k != w && !gens[k].divides(lcm) {
                    return Some((u, w, k));
                }
            }
        }
    }
    None
}

fn path_filter_witness(
    edges: &[(usize, usize)],
    gens: &[Monomial],
    pair_lcm: &HashMap<(usize, usize), Monomial>,
    ring: &Ring,
) -> String {
    match path_filter_violation(edges, gens, pair_lcm, gens.len()) {
        Some((u, w, k)) => format!(
            "subgraph at multidegree {} omits {} on the path between {} and {}",
            ring.format(&pair_lcm[&(u, w)]),
            ring.format(&gens[k]),
            ring.format(&gens[u]),
            ring.format(&gens[w]),
        ),
        None => "unconfirmed candidate".into(),
    }
}

fn describe_failure(ring: &Ring, report: &SupportReport) -> String {
    if let Some(b) = report.disconnected_at.first() {
        format!("induced subgraph disconnected at multidegree {}", ring.format(b))
    } else {
        format!("non-minimal edges {:?}", report.non_minimal_edges)
    }
}

fn tree_path(adj: &[Vec<usize>], u: usize, w: usize) -> Vec<usize> {
    // DFS from u recording parents; unique path in a tree.
    let n = adj.len();
    let mut parent = vec![usize::MAX; n];
    let mut stack = vec![u];
    let mut seen = vec![false; n];
    seen[u] = true;
    while let Some(v) = stack.pop() {
        for &x in &adj[v] {
            if !seen[x] {
                seen[x] = true;
                parent[x] = v;
                stack.push(x);
            }
        }
    }
    let mut path = vec![w];
    let mut cur = w;
    while cur != u {
        cur = parent[cur];
        path.push(cur);
    }
    path.reverse();
    path
}

fn next_sequence(seq: &mut [usize], base: usize) -> bool {
    for digit in seq.iter_mut().rev() {
        *digit += 1;
        if *digit < base {
            return true;
        }
        *digit = 0;
    }
    false
}
