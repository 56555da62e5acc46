//! File formats: versioned JSON for complexes and graded complexes, the
//! tree text format, Macaulay2 scripts, and SVG rendering of the embedded
//! complex for `q <= 3`.

use serde::{Deserialize, Serialize};

use crate::complex::{CellComplex, Cube};
use crate::error::{Error, Result};
use crate::monomial::{ExponentVector, Monomial, Ring};
use crate::resolution::{BasisKey, GradedComplex};
use crate::tree::{path_matrix, RootedTree};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
struct RingDoc {
    vars: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
struct TreeDoc {
    /// Vertex labels as exponent vectors, in vertex order.
    labels: Vec<Vec<u32>>,
    /// `tau(i)` for `i = 1..=q`.
    tau: Vec<usize>,
}

#[derive(Debug, Serialize, Deserialize)]
struct CellDoc {
    dim: usize,
    sink: Vec<u32>,
    #[serde(rename = "B")]
    b: Vec<usize>,
    coords: Vec<i64>,
    monomial_label: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct ComplexDoc {
    schema_version: u32,
    ring: RingDoc,
    tree: TreeDoc,
    r: u32,
    cells: Vec<CellDoc>,
}

/// The minimal valid document: schema version only.
pub fn empty_document() -> String {
    serde_json::json!({ "schema_version": SCHEMA_VERSION }).to_string()
}

fn tree_doc(tree: &RootedTree) -> TreeDoc {
    TreeDoc {
        labels: tree.labels().iter().map(|m| m.exponents().to_vec()).collect(),
        tau: (1..=tree.q()).map(|i| tree.tau(i)).collect(),
    }
}

fn tree_from_doc(ring: Ring, doc: &TreeDoc) -> Result<RootedTree> {
    let labels = doc
        .labels
        .iter()
        .map(|e| {
            if e.len() != ring.n() {
                return Err(Error::Json(format!(
                    "label has {} exponents for {} variables",
                    e.len(),
                    ring.n()
                )));
            }
            Ok(Monomial::new(e.clone()))
        })
        .collect::<Result<Vec<_>>>()?;
    RootedTree::new(ring, labels, doc.tau.clone())
}

/// Serializes a cell complex, including the embedding coordinates and
/// monomial label of every cell.
pub fn complex_to_json(cx: &CellComplex) -> String {
    let tree = cx.tree();
    let phi = path_matrix(tree);
    let mut cells = Vec::new();
    for (dim, layer) in cx.cells().iter().enumerate() {
        for c in layer {
            cells.push(CellDoc {
                dim,
                sink: c.sink.entries().to_vec(),
                b: c.dirs.clone(),
                coords: phi.apply(&c.sink.entries()[1..]),
                monomial_label: tree
                    .ring()
                    .format(&crate::resolution::cell_label(c, tree)),
            });
        }
    }
    let doc = ComplexDoc {
        schema_version: SCHEMA_VERSION,
        ring: RingDoc {
            vars: tree.ring().var_names().to_vec(),
        },
        tree: tree_doc(tree),
        r: cx.r(),
        cells,
    };
    serde_json::to_string_pretty(&doc).expect("serializable")
}

/// Reconstructs a cell complex from its JSON document. Cells are taken
/// from the document (not re-derived), preserving order within each
/// dimension.
pub fn complex_from_json(text: &str) -> Result<CellComplex> {
    let doc: ComplexDoc =
        serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))?;
    if doc.schema_version != SCHEMA_VERSION {
        return Err(Error::Json(format!(
            "unsupported schema_version {}",
            doc.schema_version
        )));
    }
    let ring = Ring::new(doc.ring.vars.clone());
    let tree = tree_from_doc(ring, &doc.tree)?;
    let max_dim = doc.cells.iter().map(|c| c.dim).max().unwrap_or(0);
    let mut cells: Vec<Vec<Cube>> = vec![Vec::new(); max_dim + 1];
    for c in &doc.cells {
        cells[c.dim].push(Cube {
            sink: ExponentVector::new(c.sink.clone()),
            dirs: c.b.clone(),
        });
    }
    Ok(CellComplex::from_parts(tree, doc.r, cells))
}

#[derive(Debug, Serialize, Deserialize)]
struct EntryDoc {
    row: usize,
    coeff: i64,
    monomial: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct BasisDoc {
    /// `{"cell": {...}}` or `{"wedge": {...}}` descriptor.
    key: serde_json::Value,
    multidegree: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct GradedDoc {
    schema_version: u32,
    ring: RingDoc,
    bases: Vec<Vec<BasisDoc>>,
    diffs: Vec<Vec<Vec<EntryDoc>>>,
    augmentation: Vec<String>,
}

/// Serializes a graded complex (cellular resolution or Koszul strand).
pub fn graded_to_json(gc: &GradedComplex) -> String {
    let ring = &gc.ring;
    let bases = gc
        .bases
        .iter()
        .map(|layer| {
            layer
                .iter()
                .map(|b| BasisDoc {
                    key: match &b.key {
                        BasisKey::Cell { sink, dirs } => serde_json::json!({
                            "cell": { "sink": sink.entries(), "B": dirs }
                        }),
                        BasisKey::Wedge { dirs, t_exp } => serde_json::json!({
                            "wedge": { "J": dirs, "b": t_exp.entries() }
                        }),
                    },
                    multidegree: ring.format(&b.multidegree),
                })
                .collect()
        })
        .collect();
    let diffs = gc
        .diffs
        .iter()
        .map(|m| {
            m.cols
                .iter()
                .map(|col| {
                    col.iter()
                        .map(|(row, t)| EntryDoc {
                            row: *row,
                            coeff: t.coeff,
                            monomial: ring.format(&t.monomial),
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let doc = GradedDoc {
        schema_version: SCHEMA_VERSION,
        ring: RingDoc {
            vars: ring.var_names().to_vec(),
        },
        bases,
        diffs,
        augmentation: gc.augmentation.iter().map(|m| ring.format(m)).collect(),
    };
    serde_json::to_string_pretty(&doc).expect("serializable")
}

/// The tree text format:
///
/// ```text
/// vars: x,y,z,u
/// label: 0 x*y
/// label: 1 y*z
/// edge: 0 1
/// ```
pub fn tree_to_text(tree: &RootedTree) -> String {
    let ring = tree.ring();
    let mut out = format!("vars: {}\n", ring.var_names().join(","));
    for (i, l) in tree.labels().iter().enumerate() {
        out.push_str(&format!("label: {i} {}\n", ring.format(l)));
    }
    for i in 1..=tree.q() {
        out.push_str(&format!("edge: {} {}\n", tree.tau(i), i));
    }
    out
}

/// Parses the tree text format. Edges must satisfy `tau(i) < i` in the
/// listed vertex numbering (use `root_and_label` to normalize first).
pub fn tree_from_text(text: &str) -> Result<RootedTree> {
    let mut vars: Option<Vec<String>> = None;
    let mut labels: Vec<(usize, String)> = Vec::new();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |msg: String| Error::Parse { pos: lineno, msg };
        if let Some(rest) = line.strip_prefix("vars:") {
            vars = Some(rest.split(',').map(|s| s.trim().to_string()).collect());
        } else if let Some(rest) = line.strip_prefix("label:") {
            let mut it = rest.trim().splitn(2, char::is_whitespace);
            let idx: usize = it
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| err("label needs a vertex index".into()))?;
            let mono = it
                .next()
                .ok_or_else(|| err("label needs a monomial".into()))?;
            labels.push((idx, mono.trim().to_string()));
        } else if let Some(rest) = line.strip_prefix("edge:") {
            let parts: Vec<usize> = rest
                .split_whitespace()
                .map(|s| s.parse().map_err(|_| err(format!("bad edge `{rest}`"))))
                .collect::<Result<_>>()?;
            if parts.len() != 2 {
                return Err(err(format!("edge needs two endpoints, got `{rest}`")));
            }
            edges.push((parts[0], parts[1]));
        } else {
            return Err(err(format!("unrecognized line `{line}`")));
        }
    }
    let vars = vars.ok_or(Error::Parse {
        pos: 0,
        msg: "missing vars: header".into(),
    })?;
    let ring = Ring::new(vars.clone());
    labels.sort_by_key(|(i, _)| *i);
    if labels.iter().enumerate().any(|(k, (i, _))| k != *i) {
        return Err(Error::Parse {
            pos: 0,
            msg: "vertex labels must cover 0..=q exactly once".into(),
        });
    }
    let monomials = labels
        .iter()
        .map(|(_, s)| parse_monomial(&ring, s))
        .collect::<Result<Vec<_>>>()?;
    let mut parent = vec![usize::MAX; monomials.len().saturating_sub(1)];
    for (u, v) in edges {
        let (lo, hi) = if u < v { (u, v) } else { (v, u) };
        if hi == 0 || hi > parent.len() || parent[hi - 1] != usize::MAX {
            return Err(Error::NotATree(format!("bad or repeated edge ({u}, {v})")));
        }
        parent[hi - 1] = lo;
    }
    if parent.contains(&usize::MAX) {
        return Err(Error::NotATree("not enough edges".into()));
    }
    RootedTree::new(ring, monomials, parent)
}

/// Parses one monomial, e.g. `x^2*y`, against a fixed ring.
pub fn parse_monomial(ring: &Ring, text: &str) -> Result<Monomial> {
    let mut exps = vec![0u32; ring.n()];
    if text.trim() == "1" {
        return Ok(Monomial::new(exps));
    }
    for factor in text.split('*') {
        let factor = factor.trim();
        let (name, exp) = match factor.split_once('^') {
            Some((n, e)) => (
                n.trim(),
                e.trim().parse::<u32>().map_err(|_| Error::Parse {
                    pos: 0,
                    msg: format!("invalid exponent in `{factor}`"),
                })?,
            ),
            None => (factor, 1),
        };
        let idx = ring
            .var_names()
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::Parse {
                pos: 0,
                msg: format!("unknown variable `{name}`"),
            })?;
        exps[idx] += exp;
    }
    Ok(Monomial::new(exps))
}

fn m2_entry(ring: &Ring, coeff: i64, m: &Monomial) -> String {
    let mono = if m.is_one() {
        "1".to_string()
    } else {
        ring.format(m)
    };
    match coeff {
        0 => "0".into(),
        1 => mono,
        -1 => format!("-{mono}"),
        c => format!("{c}*{mono}"),
    }
}

/// Emits a self-contained Macaulay2 script declaring the ring, the ideal,
/// the differentials, and assertions comparing against `res(I^r)`.
pub fn export_m2(tree: &RootedTree, r: u32, gc: &GradedComplex) -> String {
    let ring = tree.ring();
    let mut s = String::new();
    s.push_str("-- cellular resolution of the r-th power; verify with: M2 --script\n");
    s.push_str(&format!("R = QQ[{}];\n", ring.var_names().join(",")));
    s.push_str(&format!(
        "I = ideal({});\n",
        tree.labels()
            .iter()
            .map(|m| ring.format(m))
            .collect::<Vec<_>>()
            .join(", ")
    ));
    s.push_str(&format!("r = {r};\n"));
    for (k, m) in gc.diffs.iter().enumerate() {
        let mut dense = vec![vec![(0i64, Monomial::one(ring.n())); m.cols.len()]; m.rows];
        for (c, col) in m.cols.iter().enumerate() {
            for (row, t) in col {
                dense[*row][c] = (t.coeff, t.monomial.clone());
            }
        }
        let rows: Vec<String> = dense
            .iter()
            .map(|row| {
                row.iter()
                    .map(|(c, mo)| m2_entry(ring, *c, mo))
                    .collect::<Vec<_>>()
                    .join(", ")
            })
            .collect();
        s.push_str(&format!("D{} = matrix{{{{{}}}}};\n", k + 1, rows.join("}, {")));
    }
    for k in 1..gc.diffs.len() {
        s.push_str(&format!("assert(D{k} * D{} == 0);\n", k + 1));
    }
    let betti: Vec<String> = gc.betti().iter().map(|b| b.to_string()).collect();
    s.push_str("F = res module I^r;\n");
    s.push_str(&format!(
        "assert(toList apply(0..length F, i -> rank F_i) == {{{}}});\n",
        betti.join(", ")
    ));
    s.push_str(&format!("assert(numrows D1 == {});\n", gc.bases[0].len()));
    s.push_str("print \"ok\";\n");
    s
}

const SVG_SCALE: f64 = 90.0;
const SVG_MARGIN: f64 = 60.0;

/// Renders the embedded complex for `q <= 3`: vertices with monomial
/// labels, directed edges with arrowheads, and shaded 2-cells. The `q = 3`
/// projection is `(x, y, z) -> (x + 0.35 z, y + 0.35 z)`. Output is
/// deterministic: cells are traversed in canonical order with fixed-point
/// coordinates.
pub fn render_svg(cx: &CellComplex) -> Result<String> {
    let tree = cx.tree();
    let q = tree.q();
    if q > 3 {
        return Err(Error::RenderDimension(q));
    }
    let phi = path_matrix(tree);
    let project = |a: &ExponentVector| -> (f64, f64) {
        let c = phi.apply(&a.entries()[1..]);
        match q {
            0 => (0.0, 0.0),
            1 => (c[0] as f64, 0.0),
            2 => (c[0] as f64, c[1] as f64),
            _ => (
                c[0] as f64 + 0.35 * c[2] as f64,
                c[1] as f64 + 0.35 * c[2] as f64,
            ),
        }
    };

    let verts: Vec<(f64, f64)> = cx.cells()[0].iter().map(|c| project(&c.sink)).collect();
    let max_x = verts.iter().map(|p| p.0).fold(0.0f64, f64::max);
    let max_y = verts.iter().map(|p| p.1).fold(0.0f64, f64::max);
    let to_screen = |p: (f64, f64)| -> (f64, f64) {
        (
            SVG_MARGIN + SVG_SCALE * p.0,
            SVG_MARGIN + SVG_SCALE * (max_y - p.1),
        )
    };
    let width = 2.0 * SVG_MARGIN + SVG_SCALE * max_x;
    let height = 2.0 * SVG_MARGIN + SVG_SCALE * max_y;

    let mut s = String::new();
    s.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.0}\" height=\"{height:.0}\" viewBox=\"0 0 {width:.0} {height:.0}\">\n"
    ));
    s.push_str("  <defs><marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"9\" refY=\"5\" markerWidth=\"6\" markerHeight=\"6\" orient=\"auto-start-reverse\"><path d=\"M 0 0 L 10 5 L 0 10 z\" fill=\"#444\"/></marker></defs>\n");

    // Shaded 2-cells first (background), traversing source -> source+e_i ->
    // sink -> source+e_j.
    if cx.cells().len() > 2 {
        for c in &cx.cells()[2] {
            let vs = c.vertices(tree);
            // vertices() orders by subset bitmask: source, +first dir,
            // +second dir, sink.
            let poly = [&vs[0], &vs[1], &vs[3], &vs[2]];
            let pts: Vec<String> = poly
                .iter()
                .map(|v| {
                    let (x, y) = to_screen(project(v));
                    format!("{x:.2},{y:.2}")
                })
                .collect();
            s.push_str(&format!(
                "  <polygon points=\"{}\" fill=\"#d9d9d9\" stroke=\"none\"/>\n",
                pts.join(" ")
            ));
        }
    }
    if cx.cells().len() > 1 {
        for c in &cx.cells()[1] {
            let src = c.source(tree);
            let (x1, y1) = to_screen(project(&src));
            let (x2, y2) = to_screen(project(&c.sink));
            // Shorten toward the target so the arrowhead clears the vertex.
            let (dx, dy) = (x2 - x1, y2 - y1);
            let len = (dx * dx + dy * dy).sqrt().max(1e-9);
            let (ex, ey) = (x2 - 10.0 * dx / len, y2 - 10.0 * dy / len);
            s.push_str(&format!(
                "  <line x1=\"{x1:.2}\" y1=\"{y1:.2}\" x2=\"{ex:.2}\" y2=\"{ey:.2}\" stroke=\"#444\" stroke-width=\"1.5\" marker-end=\"url(#arrow)\"/>\n"
            ));
        }
    }
    for (c, p) in cx.cells()[0].iter().zip(&verts) {
        let (x, y) = to_screen(*p);
        let label = tree
            .ring()
            .format(&crate::monomial::power_product(tree.labels(), &c.sink));
        s.push_str(&format!(
            "  <circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"3.5\" fill=\"#111\"/>\n"
        ));
        s.push_str(&format!(
            "  <text x=\"{:.2}\" y=\"{:.2}\" font-size=\"13\" font-family=\"monospace\" fill=\"#111\">{label}</text>\n",
            x + 6.0,
            y + 14.0
        ));
    }
    s.push_str("</svg>\n");
    Ok(s)
}
