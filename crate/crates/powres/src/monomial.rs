//! Exact monomial arithmetic, monomial ideals, and the index set `N_r` of
//! generators of the r-th power.
//!
//! A [`Monomial`] is an exponent vector over the variables of a [`Ring`];
//! a [`MonomialIdeal`] is an ordered, minimal generating set of monomials.
//! The compositions of `r` into `q+1` parts, enumerated by
//! [`enumerate_nr`], index the minimal generators `m^a` of `I^r`.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Descriptor of the ambient polynomial ring: a fixed ordered variable list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ring {
    vars: Vec<String>,
}

impl Ring {
    pub fn new(vars: Vec<String>) -> Self {
        Ring { vars }
    }

    /// Number of variables `n`.
    pub fn n(&self) -> usize {
        self.vars.len()
    }

    pub fn var_name(&self, i: usize) -> &str {
        &self.vars[i]
    }

    pub fn var_names(&self) -> &[String] {
        &self.vars
    }

    /// The monomial `x_i`.
    pub fn var(&self, i: usize) -> Monomial {
        let mut e = vec![0u32; self.n()];
        e[i] = 1;
        Monomial::new(e)
    }

    /// Renders a monomial using this ring's variable names, e.g. `x^2*y`.
    pub fn format(&self, m: &Monomial) -> String {
        let mut parts = Vec::new();
        for (i, &e) in m.exponents().iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(self.vars[i].clone()),
                k => parts.push(format!("{}^{}", self.vars[i], k)),
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

/// A monomial, stored as its exponent vector.
///
/// All arithmetic is exact and overflow-checked.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Monomial {
    exponents: Vec<u32>,
}

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial { exponents }
    }

    /// The constant monomial `1` in `n` variables.
    pub fn one(n: usize) -> Self {
        Monomial { exponents: vec![0; n] }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn n(&self) -> usize {
        self.exponents.len()
    }

    pub fn degree(&self) -> u64 {
        self.exponents.iter().map(|&e| e as u64).sum()
    }

    pub fn is_one(&self) -> bool {
        self.exponents.iter().all(|&e| e == 0)
    }

    /// All exponents in `{0, 1}`.
    pub fn is_squarefree(&self) -> bool {
        self.exponents.iter().all(|&e| e <= 1)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        assert_eq!(self.n(), other.n(), "ring mismatch");
        self.exponents
            .iter()
            .zip(&other.exponents)
            .all(|(a, b)| a <= b)
    }

    /// Entrywise max of exponents.
    pub fn lcm(&self, other: &Monomial) -> Monomial {
        assert_eq!(self.n(), other.n(), "ring mismatch");
        Monomial::new(
            self.exponents
                .iter()
                .zip(&other.exponents)
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    /// Entrywise min of exponents.
    pub fn gcd(&self, other: &Monomial) -> Monomial {
        assert_eq!(self.n(), other.n(), "ring mismatch");
        Monomial::new(
            self.exponents
                .iter()
                .zip(&other.exponents)
                .map(|(a, b)| *a.min(b))
                .collect(),
        )
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        assert_eq!(self.n(), other.n(), "ring mismatch");
        Monomial::new(
            self.exponents
                .iter()
                .zip(&other.exponents)
                .map(|(a, b)| a.checked_add(*b).expect("exponent overflow"))
                .collect(),
        )
    }

    /// Exact division; panics if `other` does not divide `self`.
    pub fn div(&self, other: &Monomial) -> Monomial {
        assert!(other.divides(self), "inexact monomial division");
        Monomial::new(
            self.exponents
                .iter()
                .zip(&other.exponents)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn pow(&self, k: u32) -> Monomial {
        Monomial::new(
            self.exponents
                .iter()
                .map(|&e| e.checked_mul(k).expect("exponent overflow"))
                .collect(),
        )
    }

    /// Indices of variables with nonzero exponent.
    pub fn var_support(&self) -> Vec<usize> {
        self.exponents
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, _)| i)
            .collect()
    }
}

/// A monomial ideal: ring descriptor plus an ordered minimal generating set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialIdeal {
    ring: Ring,
    generators: Vec<Monomial>,
}

impl MonomialIdeal {
    /// Builds an ideal, rejecting duplicate or non-minimal generating sets.
    pub fn new(ring: Ring, generators: Vec<Monomial>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::Parse {
                pos: 0,
                msg: "ideal needs at least one generator".into(),
            });
        }
        for g in &generators {
            assert_eq!(g.n(), ring.n(), "ring mismatch");
        }
        for i in 0..generators.len() {
            for j in 0..generators.len() {
                if i == j {
                    continue;
                }
                if generators[i] == generators[j] && i < j {
                    return Err(Error::DuplicateGenerator {
                        witness: ring.format(&generators[i]),
                    });
                }
                if generators[i].divides(&generators[j]) && generators[i] != generators[j] {
                    return Err(Error::NonMinimal {
                        divisor: ring.format(&generators[i]),
                        multiple: ring.format(&generators[j]),
                    });
                }
            }
        }
        Ok(MonomialIdeal { ring, generators })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn generators(&self) -> &[Monomial] {
        &self.generators
    }

    /// `q`, where the ideal has `q + 1` generators.
    pub fn q(&self) -> usize {
        self.generators.len() - 1
    }

    pub fn is_squarefree(&self) -> bool {
        self.generators.iter().all(|g| g.is_squarefree())
    }

    /// The power generator `m^a = m_0^{a_0} ... m_q^{a_q}`.
    pub fn power_generator(&self, a: &ExponentVector) -> Monomial {
        power_product(&self.generators, a)
    }

    /// Checks injectivity of `a -> m^a` on `N_r`.
    ///
    /// Returns `None` when injective, otherwise a witness pair `a != b`
    /// with `m^a = m^b`, scanning pairs in canonical order.
    pub fn check_power_injectivity(&self, r: u32) -> Option<(ExponentVector, ExponentVector)> {
        let mut seen: HashMap<Monomial, ExponentVector> = HashMap::new();
        for a in enumerate_nr(self.q(), r) {
            let m = self.power_generator(&a);
            if let Some(prev) = seen.get(&m) {
                return Some((prev.clone(), a));
            }
            seen.insert(m, a);
        }
        None
    }
}

/// Product of `gens` with multiplicities `a`.
pub fn power_product(gens: &[Monomial], a: &ExponentVector) -> Monomial {
    assert_eq!(gens.len(), a.len(), "length mismatch");
    let mut out = Monomial::one(gens[0].n());
    for (g, &k) in gens.iter().zip(a.entries()) {
        if k > 0 {
            out = out.mul(&g.pow(k));
        }
    }
    out
}

/// An element of `N_r`: a composition `(a_0, ..., a_q)` with sum `r`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ExponentVector {
    entries: Vec<u32>,
}

impl ExponentVector {
    pub fn new(entries: Vec<u32>) -> Self {
        ExponentVector { entries }
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize) -> u32 {
        self.entries[i]
    }

    pub fn degree(&self) -> u32 {
        self.entries.iter().sum()
    }

    /// `supp(a) = { j > 0 | a_j != 0 }`.
    pub fn support(&self) -> Vec<usize> {
        (1..self.len()).filter(|&j| self.entries[j] != 0).collect()
    }

    /// `self + f_i`.
    pub fn plus_f(&self, i: usize) -> ExponentVector {
        let mut e = self.entries.clone();
        e[i] += 1;
        ExponentVector::new(e)
    }

    /// `self - f_i`, if entrywise nonnegative.
    pub fn minus_f(&self, i: usize) -> Option<ExponentVector> {
        if self.entries[i] == 0 {
            return None;
        }
        let mut e = self.entries.clone();
        e[i] -= 1;
        Some(ExponentVector::new(e))
    }

    /// `self - f_i + f_{tau}`, if entrywise nonnegative.
    pub fn step(&self, i: usize, tau: usize) -> Option<ExponentVector> {
        self.minus_f(i).map(|v| v.plus_f(tau))
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, e) in self.entries.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// Enumerates `N_r` in the canonical (reverse-lexicographic, i.e. descending
/// lex on `(a_0, ..., a_q)`) order used repo-wide for matrix layouts.
pub fn enumerate_nr(q: usize, r: u32) -> Vec<ExponentVector> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; q + 1];
    fn rec(pos: usize, rem: u32, cur: &mut Vec<u32>, out: &mut Vec<ExponentVector>) {
        if pos == cur.len() - 1 {
            cur[pos] = rem;
            out.push(ExponentVector::new(cur.clone()));
            return;
        }
        for v in (0..=rem).rev() {
            cur[pos] = v;
            rec(pos + 1, rem - v, cur, out);
        }
    }
    rec(0, r, &mut cur, &mut out);
    out
}

/// `C(q + r, r)`, the cardinality of `N_r`.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc
            .checked_mul(n - i)
            .expect("binomial overflow")
            / (i + 1);
    }
    acc
}

/// Parses an ideal description per the input grammar.
///
/// Grammar: optional header line `vars: x,y,z`, then comma- or
/// newline-separated generators; each generator is a `*`-separated product
/// of factors `name` or `name^k`. Variable order is first-appearance order
/// unless the header is present.
pub fn parse_ideal(text: &str) -> Result<MonomialIdeal> {
    let mut vars: Vec<String> = Vec::new();
    let mut fixed_vars = false;
    let mut body = text;

    let trimmed = text.trim_start();
    if let Some(rest) = trimmed.strip_prefix("vars:") {
        let line_end = rest.find('\n').unwrap_or(rest.len());
        for name in rest[..line_end].split(',') {
            let name = name.trim();
            if name.is_empty() {
                continue;
            }
            if !is_identifier(name) {
                return Err(Error::Parse {
                    pos: 0,
                    msg: format!("invalid variable name `{name}` in header"),
                });
            }
            if vars.contains(&name.to_string()) {
                return Err(Error::Parse {
                    pos: 0,
                    msg: format!("duplicate variable `{name}` in header"),
                });
            }
            vars.push(name.to_string());
        }
        fixed_vars = true;
        body = &rest[line_end..];
    }

    // First pass: collect (var, exponent) factor lists per generator.
    let mut gen_factors: Vec<Vec<(String, u32)>> = Vec::new();
    let mut pos = text.len() - body.len();
    for piece in body.split([',', '\n']) {
        let start = pos;
        pos += piece.len() + 1;
        if piece.trim().is_empty() {
            continue;
        }
        let mut factors = Vec::new();
        for factor in piece.split('*') {
            let factor = factor.trim();
            if factor.is_empty() {
                return Err(Error::Parse {
                    pos: start,
                    msg: "empty factor in generator".into(),
                });
            }
            let (name, exp) = match factor.split_once('^') {
                Some((n, e)) => {
                    let exp: u32 = e.trim().parse().map_err(|_| Error::Parse {
                        pos: start,
                        msg: format!("invalid exponent `{}`", e.trim()),
                    })?;
                    (n.trim(), exp)
                }
                None => (factor, 1),
            };
            if !is_identifier(name) {
                return Err(Error::Parse {
                    pos: start,
                    msg: format!("invalid variable name `{name}`"),
                });
            }
            if !vars.iter().any(|v| v == name) {
                if fixed_vars {
                    return Err(Error::Parse {
                        pos: start,
                        msg: format!("variable `{name}` not declared in header"),
                    });
                }
                vars.push(name.to_string());
            }
            factors.push((name.to_string(), exp));
        }
        gen_factors.push(factors);
    }

    if gen_factors.is_empty() {
        return Err(Error::Parse {
            pos: 0,
            msg: "ideal needs at least one generator".into(),
        });
    }

    let ring = Ring::new(vars);
    let mut generators = Vec::new();
    for factors in gen_factors {
        let mut exps = vec![0u32; ring.n()];
        for (name, exp) in factors {
            let idx = ring.var_names().iter().position(|v| *v == name).unwrap();
            exps[idx] = exps[idx].checked_add(exp).expect("exponent overflow");
        }
        generators.push(Monomial::new(exps));
    }
    MonomialIdeal::new(ring, generators)
}

fn is_identifier(s: &str) -> bool {
    !s.is_empty()
        && s.chars().next().unwrap().is_ascii_alphabetic()
        && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}
