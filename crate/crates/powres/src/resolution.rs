//! Free complexes read off the cubical complex: the oriented chain complex
//! over the coefficient field and its homogenization, the cellular minimal
//! free resolution of `I^r`.

use std::collections::HashMap;

use crate::complex::{cell_count_formula, CellComplex, Cube};
use crate::error::{Error, Result};
use crate::monomial::{power_product, ExponentVector, Monomial, Ring};
use crate::tree::RootedTree;

/// A term `coeff * monomial` of a matrix entry. Coefficients stay in
/// `{1, -1}` for the complexes built here, but composition products are
/// accumulated in `i64`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Term {
    pub coeff: i64,
    pub monomial: Monomial,
}

/// A column-major sparse matrix over the polynomial ring; entry lists are
/// sorted by row and carry a single term each.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    pub rows: usize,
    pub cols: Vec<Vec<(usize, Term)>>,
}

impl SparseMatrix {
    pub fn zero(rows: usize, ncols: usize) -> Self {
        SparseMatrix {
            rows,
            cols: vec![Vec::new(); ncols],
        }
    }
}

/// Identifies a free-module basis element of one of the two complexes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BasisKey {
    /// `u_{C(b, B)}` of the cellular complex.
    Cell { sink: ExponentVector, dirs: Vec<usize> },
    /// `e_{j_1} ^ ... ^ e_{j_i} (x) T^{b'}` of the Koszul strand.
    Wedge { dirs: Vec<usize>, t_exp: ExponentVector },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisElement {
    pub key: BasisKey,
    /// The multidegree (twist) of the summand `R(-deg)`.
    pub multidegree: Monomial,
}

/// A complex of free modules `F_d -> ... -> F_1 -> F_0` with an augmentation
/// recording the monomial generator each `F_0` basis element maps to.
#[derive(Debug, Clone)]
pub struct GradedComplex {
    pub ring: Ring,
    pub bases: Vec<Vec<BasisElement>>,
    /// `diffs[i] : F_{i+1} -> F_i`.
    pub diffs: Vec<SparseMatrix>,
    /// Images of the `F_0` basis under `F_0 -> I^r`; empty for the
    /// unlabeled oriented chain complex.
    pub augmentation: Vec<Monomial>,
}

impl GradedComplex {
    pub fn length(&self) -> usize {
        self.bases.len() - 1
    }

    pub fn betti(&self) -> Vec<u64> {
        self.bases.iter().map(|b| b.len() as u64).collect()
    }
}

/// The monomial label of a cell: `m^b * prod_{j in B} m_{tau(j)}/gcd`, i.e.
/// `m^b` times, for each direction, the variables of the parent label
/// missing from the child label.
pub fn cell_label(cube: &Cube, tree: &RootedTree) -> Monomial {
    let mut label = power_product(tree.labels(), &cube.sink);
    let n = tree.ring().n();
    for &j in &cube.dirs {
        let child = tree.label(j);
        let parent = tree.label(tree.tau(j));
        for v in 0..n {
            if parent.exponents()[v] > 0 && child.exponents()[v] == 0 {
                label = label.mul(&tree.ring().var(v));
            }
        }
    }
    label
}

/// Independent oracle for [`cell_label`]: the lcm of the labels `m^a` over
/// all `2^{|B|}` vertices of the cube.
pub fn cell_label_bruteforce(cube: &Cube, tree: &RootedTree) -> Monomial {
    cube.vertices(tree)
        .iter()
        .map(|v| power_product(tree.labels(), v))
        .reduce(|a, b| a.lcm(&b))
        .expect("cube has vertices")
}

/// The two coefficient monomials of the differential in direction `j`:
/// `(lcm(m_j, m_tau(j))/m_j, lcm(m_j, m_tau(j))/m_tau(j))`.
pub fn edge_ratios(tree: &RootedTree, j: usize) -> (Monomial, Monomial) {
    let e = tree.edge_label(j);
    (e.div(tree.label(j)), e.div(tree.label(tree.tau(j))))
}

/// Cross-check of the label-quotient simplification: the quotient of the
/// cell label by each facet's label must equal the corresponding edge
/// ratio. Returns `(face_ratio, shift_ratio)` or a mismatch description.
pub fn simplify_ratios(tree: &RootedTree, cube: &Cube, k0: usize) -> Result<(Monomial, Monomial)> {
    let j = cube.dirs[k0];
    let rest: Vec<usize> = cube.dirs.iter().copied().filter(|&x| x != j).collect();
    let face = Cube { sink: cube.sink.clone(), dirs: rest.clone() };
    let shifted = Cube {
        sink: cube.sink.step(j, tree.tau(j)).expect("direction in support"),
        dirs: rest,
    };
    let top = cell_label_bruteforce(cube, tree);
    let face_ratio = top.div(&cell_label_bruteforce(&face, tree));
    let shift_ratio = top.div(&cell_label_bruteforce(&shifted, tree));
    let (want_face, want_shift) = edge_ratios(tree, j);
    if face_ratio != want_face || shift_ratio != want_shift {
        return Err(Error::DimensionMismatch(format!(
            "label quotients at direction {j} disagree with edge ratios"
        )));
    }
    Ok((face_ratio, shift_ratio))
}

fn differential(
    cx: &CellComplex,
    dim: usize,
    entry_monomials: bool,
) -> SparseMatrix {
    let tree = cx.tree();
    let lower = &cx.cells()[dim - 1];
    let upper = &cx.cells()[dim];
    let one = Monomial::one(tree.ring().n());
    let mut cols = Vec::with_capacity(upper.len());
    for cube in upper {
        let mut entries: HashMap<usize, Term> = HashMap::new();
        for (k0, &j) in cube.dirs.iter().enumerate() {
            let sign = if k0 % 2 == 0 { 1 } else { -1 };
            let rest: Vec<usize> = cube.dirs.iter().copied().filter(|&x| x != j).collect();
            let (face_ratio, shift_ratio) = if entry_monomials {
                edge_ratios(tree, j)
            } else {
                (one.clone(), one.clone())
            };
            let face = Cube { sink: cube.sink.clone(), dirs: rest.clone() };
            let shifted = Cube {
                sink: cube.sink.step(j, tree.tau(j)).expect("direction in support"),
                dirs: rest,
            };
            for (c, sgn, ratio) in [(face, sign, face_ratio), (shifted, -sign, shift_ratio)] {
                let (d, pos) = cx.position(&c).expect("face present in complex");
                debug_assert_eq!(d, dim - 1);
                let prev = entries.insert(pos, Term { coeff: sgn, monomial: ratio });
                debug_assert!(prev.is_none(), "faces of a cube are distinct");
            }
        }
        let mut col: Vec<(usize, Term)> = entries.into_iter().collect();
        col.sort_by_key(|(row, _)| *row);
        cols.push(col);
    }
    SparseMatrix { rows: lower.len(), cols }
}

fn bases_of(cx: &CellComplex, labeled: bool) -> Vec<Vec<BasisElement>> {
    let tree = cx.tree();
    let one = Monomial::one(tree.ring().n());
    cx.cells()
        .iter()
        .map(|layer| {
            layer
                .iter()
                .map(|c| BasisElement {
                    key: BasisKey::Cell { sink: c.sink.clone(), dirs: c.dirs.clone() },
                    multidegree: if labeled { cell_label(c, tree) } else { one.clone() },
                })
                .collect()
        })
        .collect()
}

/// The oriented chain complex of the cell complex over the coefficient
/// field: all entries are scalars, labels ignored.
pub fn oriented_chain_complex(cx: &CellComplex) -> GradedComplex {
    GradedComplex {
        ring: cx.tree().ring().clone(),
        bases: bases_of(cx, false),
        diffs: (1..cx.cells().len()).map(|d| differential(cx, d, false)).collect(),
        augmentation: Vec::new(),
    }
}

/// The homogenized complex: the cellular minimal free resolution of `I^r`,
/// with the augmentation `u_{C(b, {})} -> m^b`.
pub fn homogenize(cx: &CellComplex) -> GradedComplex {
    let tree = cx.tree();
    let augmentation = cx.cells()[0]
        .iter()
        .map(|c| power_product(tree.labels(), &c.sink))
        .collect();
    GradedComplex {
        ring: tree.ring().clone(),
        bases: bases_of(cx, true),
        diffs: (1..cx.cells().len()).map(|d| differential(cx, d, true)).collect(),
        augmentation,
    }
}

/// `beta_t(I^r) = C(q, t) * C(q + r - t, r - t)`.
pub fn betti_formula(q: usize, r: u32, t: usize) -> u64 {
    cell_count_formula(q, r, t)
}

/// `pd I^r = min(q, r)`.
pub fn pd_power(q: usize, r: u32) -> u64 {
    (q as u64).min(r as u64)
}

/// `pd I^r/I^{r+1}`: `q + 1` once `r >= q - 1`, and `r + 2` before that.
pub fn pd_quotient(q: usize, r: u32) -> u64 {
    if r as u64 >= q as u64 - 1 {
        q as u64 + 1
    } else {
        r as u64 + 2
    }
}
