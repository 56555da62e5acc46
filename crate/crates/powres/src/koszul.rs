//! The degree-`r` strand of the Koszul resolution over the Rees presentation
//! ring, and the isomorphism with the cellular resolution.
//!
//! The first syzygies of `I` are generated by the regular sequence
//! `g_k = (lcm(m_k, m_tau(k))/m_k) T_k - (lcm(m_k, m_tau(k))/m_tau(k)) T_tau(k)`;
//! the strand `K^r` has basis `e_J (x) T^{b'}` with `J` of size `i` and
//! `b'` in `N_{r-i}`, and its differential contracts `e_J` against the `g`s.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::monomial::{enumerate_nr, power_product, ExponentVector, Monomial};
use crate::resolution::{BasisElement, BasisKey, GradedComplex, SparseMatrix, Term};
use crate::tree::RootedTree;

/// The syzygy `g_k`: `head * T_k - tail * T_{tau(k)}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyzygyGenerator {
    pub k: usize,
    pub tau_k: usize,
    pub head: Monomial,
    pub tail: Monomial,
}

pub fn syzygy_generators(tree: &RootedTree) -> Vec<SyzygyGenerator> {
    (1..=tree.q())
        .map(|k| {
            let e = tree.edge_label(k);
            SyzygyGenerator {
                k,
                tau_k: tree.tau(k),
                head: e.div(tree.label(k)),
                tail: e.div(tree.label(tree.tau(k))),
            }
        })
        .collect()
}

/// Substituting `T_i -> m_i` must annihilate every syzygy:
/// `head * m_k = tail * m_tau(k) = lcm(m_k, m_tau(k))`.
pub fn syzygies_vanish_on_generators(tree: &RootedTree) -> bool {
    syzygy_generators(tree).iter().all(|g| {
        g.head.mul(tree.label(g.k)) == g.tail.mul(tree.label(g.tau_k))
    })
}

/// Size-`i` subsets of `{1, ..., q}` in colexicographic order.
pub fn subsets_colex(q: usize, i: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(i);
    fn rec(q: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        let lo = cur.last().map_or(1, |&x| x + 1);
        for v in lo..=q {
            cur.push(v);
            rec(q, size, cur, out);
            cur.pop();
        }
    }
    rec(q, i, &mut cur, &mut out);
    out.sort_by(|a, b| {
        let ra: Vec<usize> = a.iter().rev().copied().collect();
        let rb: Vec<usize> = b.iter().rev().copied().collect();
        ra.cmp(&rb)
    });
    out
}

/// Builds the strand `K^r` as a graded complex. Homological degree `i` has
/// basis pairs `(J, b')` ordered with `J` colexicographic outer and `b'` in
/// the canonical `N_{r-i}` order inner.
pub fn koszul_strand(tree: &RootedTree, r: u32) -> GradedComplex {
    let q = tree.q();
    let gens = syzygy_generators(tree);
    let max_i = q.min(r as usize);

    let mut bases: Vec<Vec<BasisElement>> = Vec::with_capacity(max_i + 1);
    let mut positions: Vec<HashMap<(Vec<usize>, ExponentVector), usize>> = Vec::new();
    for i in 0..=max_i {
        let mut layer = Vec::new();
        let mut pos = HashMap::new();
        for dirs in subsets_colex(q, i) {
            let wedge_degree = dirs
                .iter()
                .fold(Monomial::one(tree.ring().n()), |acc, &j| {
                    acc.mul(&tree.edge_label(j))
                });
            for b in enumerate_nr(q, r - i as u32) {
                pos.insert((dirs.clone(), b.clone()), layer.len());
                layer.push(BasisElement {
                    multidegree: wedge_degree.mul(&power_product(tree.labels(), &b)),
                    key: BasisKey::Wedge { dirs: dirs.clone(), t_exp: b },
                });
            }
        }
        bases.push(layer);
        positions.push(pos);
    }

    let mut diffs = Vec::with_capacity(max_i);
    for i in 1..=max_i {
        let mut cols = Vec::with_capacity(bases[i].len());
        for be in &bases[i] {
            let BasisKey::Wedge { dirs, t_exp } = &be.key else {
                unreachable!("strand basis is wedge-indexed")
            };
            let mut col: Vec<(usize, Term)> = Vec::with_capacity(2 * dirs.len());
            for (k0, &j) in dirs.iter().enumerate() {
                let sign = if k0 % 2 == 0 { 1 } else { -1 };
                let rest: Vec<usize> = dirs.iter().copied().filter(|&x| x != j).collect();
                let g = &gens[j - 1];
                let head_row = positions[i - 1][&(rest.clone(), t_exp.plus_f(g.k))];
                let tail_row = positions[i - 1][&(rest, t_exp.plus_f(g.tau_k))];
                col.push((head_row, Term { coeff: sign, monomial: g.head.clone() }));
                col.push((tail_row, Term { coeff: -sign, monomial: g.tail.clone() }));
            }
            col.sort_by_key(|(row, _)| *row);
            cols.push(col);
        }
        diffs.push(SparseMatrix { rows: bases[i - 1].len(), cols });
    }

    let augmentation = bases[0]
        .iter()
        .map(|be| be.multidegree.clone())
        .collect();

    GradedComplex {
        ring: tree.ring().clone(),
        bases,
        diffs,
        augmentation,
    }
}

/// Outcome of checking that `rho(u_{C(b,B)}) = e_B (x) T^{b - sum f_j}` is
/// an isomorphism of complexes.
#[derive(Debug, Clone)]
pub struct RhoReport {
    /// Per homological degree, the basis bijection from the cellular
    /// complex to the strand.
    pub maps: Vec<Vec<usize>>,
    pub degrees_match: bool,
    pub commutes: bool,
}

impl RhoReport {
    pub fn ok(&self) -> bool {
        self.degrees_match && self.commutes
    }
}

/// Checks that `rho` is a degree-preserving bijection on bases commuting
/// with the differentials, between [`crate::resolution::homogenize`] of the
/// cellular complex and [`koszul_strand`] at the same `r`.
pub fn rho_isomorphism(cellular: &GradedComplex, strand: &GradedComplex) -> Result<RhoReport> {
    if cellular.bases.len() != strand.bases.len() {
        return Err(Error::DimensionMismatch(format!(
            "cellular length {} vs strand length {}",
            cellular.length(),
            strand.length()
        )));
    }
    let mut maps = Vec::with_capacity(cellular.bases.len());
    let mut degrees_match = true;
    for (cl, sl) in cellular.bases.iter().zip(&strand.bases) {
        if cl.len() != sl.len() {
            return Err(Error::DimensionMismatch(format!(
                "rank {} vs {} in one homological degree",
                cl.len(),
                sl.len()
            )));
        }
        let lookup: HashMap<&BasisKey, usize> =
            sl.iter().enumerate().map(|(p, b)| (&b.key, p)).collect();
        let mut map = Vec::with_capacity(cl.len());
        let mut seen = vec![false; sl.len()];
        for b in cl {
            let BasisKey::Cell { sink, dirs } = &b.key else {
                return Err(Error::DimensionMismatch(
                    "cellular complex has non-cell basis".into(),
                ));
            };
            let mut t_exp = sink.clone();
            for &j in dirs {
                t_exp = t_exp.minus_f(j).ok_or_else(|| {
                    Error::DimensionMismatch(format!("direction {j} not in supp({sink})"))
                })?;
            }
            let target = BasisKey::Wedge { dirs: dirs.clone(), t_exp };
            let p = *lookup.get(&target).ok_or_else(|| {
                Error::DimensionMismatch("rho image missing from strand basis".into())
            })?;
            if seen[p] {
                return Err(Error::DimensionMismatch("rho not injective".into()));
            }
            seen[p] = true;
            if b.multidegree != sl[p].multidegree {
                degrees_match = false;
            }
            map.push(p);
        }
        maps.push(map);
    }

    // Exact commutation: rho(dF(x)) = dK(rho(x)) column by column.
    let mut commutes = true;
    for i in 0..cellular.diffs.len() {
        let df = &cellular.diffs[i];
        let dk = &strand.diffs[i];
        for (col, fcol) in df.cols.iter().enumerate() {
            let mapped: HashMap<usize, &Term> =
                fcol.iter().map(|(row, t)| (maps[i][*row], t)).collect();
            let kcol = &dk.cols[maps[i + 1][col]];
            if kcol.len() != mapped.len()
                || !kcol.iter().all(|(row, t)| mapped.get(row) == Some(&t))
            {
                commutes = false;
            }
        }
    }

    Ok(RhoReport { maps, degrees_match, commutes })
}
