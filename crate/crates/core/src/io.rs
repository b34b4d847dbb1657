//! File formats and report emission.
//!
//! Algebra descriptions load from TOML or JSON (sniffed by the leading
//! character); modules, two-term complexes, and subcategories load from JSON
//! literals. Every emitter here is a pure function of its input, so repeated
//! dumps are byte-identical, and each canonical dump parses back to the value
//! it came from — `algebra_to_toml` is byte-idempotent on its own output.
//!
//! # Algebra files
//!
//! ```toml
//! vertices = [1, 2]
//! prime = 32003
//! arrows = [
//!     { id = 1, from = 1, to = 2 },
//! ]
//! relations = [
//!     [{ coeff = 1, path = [1, 2] }],
//! ]
//! ```
//!
//! `vertices` are external labels; `from`/`to` refer to them, `path` lists
//! arrow ids left to right in composition order. `prime` is optional — when
//! absent the caller's default (usually [`session_prime`]) applies.
//!
//! # Module literals
//!
//! `{"dims": [1, 1], "matrices": [[[1]]]}` — one matrix per arrow, row lists,
//! shaped `dims[from] x dims[to]`, entries reduced mod p on load.
//!
//! # Two-term literals
//!
//! `{"p1": {"2": 1}, "p0": {"1": 1}, "d": [[[0, 0, 1]]]}` — `p1`/`p0` map
//! external vertex ids to multiplicities; `d` has one row per degree −1
//! generator and one column per degree 0 generator, each entry a coefficient
//! vector over the algebra's path basis. Generators are ordered by external
//! vertex id (repeats adjacent), and the canonical dump re-presents any
//! complex in that order, which is an isomorphic re-indexing. An omitted or
//! empty `d` means the zero differential.
//!
//! A subcategory file is either a bare JSON array of two-term literals or an
//! object `{"objects": [...]}`.

use crate::algebra::{AlgRef, Algebra, Arrow, Elt, Quiver};
use crate::error::{Error, Result};
use crate::fp::{is_prime, Mat, DEFAULT_PRIME};
use crate::rep::Rep;
use crate::rtilt::{ExchangeGraph, TtClass};
use crate::twoterm::TwoTermComplex;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt::Write as _;

/* # Field prime selection */

/// Environment variable that overrides the default field prime.
pub const PRIME_ENV_VAR: &str = "RELTILT_PRIME";

/// The working prime for this session: `RELTILT_PRIME` when set (must parse
/// as a prime), otherwise [`DEFAULT_PRIME`]. An algebra file's own `prime`
/// key still wins over both.
pub fn session_prime() -> Result<u64> {
    match std::env::var(PRIME_ENV_VAR) {
        Ok(raw) if raw.trim().is_empty() => Ok(DEFAULT_PRIME),
        Ok(raw) => {
            let p: u64 = raw
                .trim()
                .parse()
                .map_err(|_| Error::Input(format!("{PRIME_ENV_VAR} must be a number, got {raw:?}")))?;
            if !is_prime(p) {
                return Err(Error::NotPrime(p));
            }
            Ok(p)
        }
        Err(_) => Ok(DEFAULT_PRIME),
    }
}

/* # Algebra files */

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AlgebraFile {
    vertices: Vec<u32>,
    #[serde(default)]
    arrows: Vec<ArrowFile>,
    #[serde(default)]
    relations: Vec<Vec<RelTermFile>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    prime: Option<u64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ArrowFile {
    id: u32,
    from: u32,
    to: u32,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RelTermFile {
    coeff: i64,
    path: Vec<u32>,
}

/// Parse an algebra description from TOML or JSON text. A file without a
/// `prime` key is built over `default_prime`.
pub fn algebra_from_str(text: &str, default_prime: u64) -> Result<AlgRef> {
    let file: AlgebraFile = if text.trim_start().starts_with('{') {
        serde_json::from_str(text).map_err(|e| Error::Input(format!("algebra JSON: {e}")))?
    } else {
        toml::from_str(text).map_err(|e| Error::Input(format!("algebra TOML: {e}")))?
    };
    let mut seen = BTreeSet::new();
    for &v in &file.vertices {
        if !seen.insert(v) {
            return Err(Error::Input(format!("duplicate vertex id {v}")));
        }
    }
    let mut quiver = Quiver { vertex_ids: file.vertices.clone(), arrows: Vec::new() };
    let mut arrow_ids = BTreeSet::new();
    for a in &file.arrows {
        if !arrow_ids.insert(a.id) {
            return Err(Error::Input(format!("duplicate arrow id {}", a.id)));
        }
        let from = quiver.vertex_index(a.from)?;
        let to = quiver.vertex_index(a.to)?;
        quiver.arrows.push(Arrow { id: a.id, from, to });
    }
    let relations: Vec<Vec<(i64, Vec<u32>)>> = file
        .relations
        .iter()
        .map(|rel| rel.iter().map(|t| (t.coeff, t.path.clone())).collect())
        .collect();
    Algebra::build(quiver, &relations, file.prime.unwrap_or(default_prime))
}

fn algebra_file(alg: &Algebra) -> AlgebraFile {
    let ids = &alg.quiver.vertex_ids;
    AlgebraFile {
        vertices: ids.clone(),
        arrows: alg
            .quiver
            .arrows
            .iter()
            .map(|a| ArrowFile { id: a.id, from: ids[a.from], to: ids[a.to] })
            .collect(),
        relations: alg
            .relations
            .iter()
            .map(|rel| {
                rel.iter()
                    .map(|(c, w)| RelTermFile {
                        coeff: *c as i64,
                        path: w.iter().map(|&ai| alg.quiver.arrows[ai].id).collect(),
                    })
                    .collect()
            })
            .collect(),
        prime: Some(alg.p),
    }
}

/// Canonical TOML dump; parsing it back and dumping again is byte-identical.
pub fn algebra_to_toml(alg: &Algebra) -> String {
    let f = algebra_file(alg);
    let mut out = String::new();
    let verts: Vec<String> = f.vertices.iter().map(|v| v.to_string()).collect();
    let _ = writeln!(out, "vertices = [{}]", verts.join(", "));
    let _ = writeln!(out, "prime = {}", alg.p);
    if f.arrows.is_empty() {
        out.push_str("arrows = []\n");
    } else {
        out.push_str("arrows = [\n");
        for a in &f.arrows {
            let _ = writeln!(out, "    {{ id = {}, from = {}, to = {} }},", a.id, a.from, a.to);
        }
        out.push_str("]\n");
    }
    if f.relations.is_empty() {
        out.push_str("relations = []\n");
    } else {
        out.push_str("relations = [\n");
        for rel in &f.relations {
            let terms: Vec<String> = rel
                .iter()
                .map(|t| {
                    let path: Vec<String> = t.path.iter().map(|x| x.to_string()).collect();
                    format!("{{ coeff = {}, path = [{}] }}", t.coeff, path.join(", "))
                })
                .collect();
            let _ = writeln!(out, "    [{}],", terms.join(", "));
        }
        out.push_str("]\n");
    }
    out
}

/// Canonical JSON dump of the same description.
pub fn algebra_to_json(alg: &Algebra) -> String {
    let f = algebra_file(alg);
    serde_json::to_string_pretty(&f).expect("algebra file serializes") + "\n"
}

/* # Module literals */

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RepFile {
    dims: Vec<usize>,
    #[serde(default)]
    matrices: Vec<Vec<Vec<u64>>>,
}

/// Parse a module literal over `alg` from JSON text. Entries are reduced mod
/// p; shapes and the relations are checked by the module constructor.
pub fn rep_from_str(alg: &AlgRef, text: &str) -> Result<Rep> {
    let f: RepFile =
        serde_json::from_str(text).map_err(|e| Error::Input(format!("module JSON: {e}")))?;
    if f.dims.len() != alg.n_vertices() {
        return Err(Error::ShapeMismatch {
            what: format!(
                "dimension vector has {} entries for {} vertices",
                f.dims.len(),
                alg.n_vertices()
            ),
        });
    }
    if f.matrices.len() != alg.quiver.arrows.len() {
        return Err(Error::ShapeMismatch {
            what: format!(
                "{} matrices given for {} arrows",
                f.matrices.len(),
                alg.quiver.arrows.len()
            ),
        });
    }
    let mut act = Vec::new();
    for (a, rows) in alg.quiver.arrows.iter().zip(&f.matrices) {
        let (r, c) = (f.dims[a.from], f.dims[a.to]);
        if rows.len() != r || rows.iter().any(|row| row.len() != c) {
            return Err(Error::ShapeMismatch {
                what: format!("matrix for arrow {} must be {r} x {c}", a.id),
            });
        }
        let mut m = Mat::zeros(alg.p, r, c);
        for (i, row) in rows.iter().enumerate() {
            for (j, &e) in row.iter().enumerate() {
                m[(i, j)] = e % alg.p;
            }
        }
        act.push(m);
    }
    Rep::new(alg.clone(), f.dims, act)
}

/// Canonical JSON dump of a module literal.
pub fn rep_to_json(m: &Rep) -> String {
    let f = RepFile {
        dims: m.dims.clone(),
        matrices: m
            .act
            .iter()
            .map(|mt| {
                (0..mt.rows)
                    .map(|i| (0..mt.cols).map(|j| mt[(i, j)]).collect())
                    .collect()
            })
            .collect(),
    };
    serde_json::to_string_pretty(&f).expect("module file serializes") + "\n"
}

/* # Two-term literals */

type VertMults = serde_json::Map<String, serde_json::Value>;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TwoTermFile {
    #[serde(default)]
    p1: VertMults,
    #[serde(default)]
    p0: VertMults,
    #[serde(default)]
    d: Vec<Vec<Vec<u64>>>,
}

/// Expand a vertex-multiplicity map into the canonical generator list:
/// sorted by external vertex id, repeats adjacent.
fn expand_mults(alg: &Algebra, map: &VertMults, side: &str) -> Result<Vec<usize>> {
    let mut entries: Vec<(u32, usize)> = Vec::new();
    for (k, v) in map {
        let id: u32 = k
            .parse()
            .map_err(|_| Error::Input(format!("{side} key {k:?} is not a vertex id")))?;
        let mult = v
            .as_u64()
            .ok_or_else(|| Error::Input(format!("{side} multiplicity for vertex {id} must be a non-negative integer")))?;
        entries.push((id, mult as usize));
    }
    entries.sort();
    let mut out = Vec::new();
    for (id, mult) in entries {
        let idx = alg.quiver.vertex_index(id)?;
        out.extend(std::iter::repeat_n(idx, mult));
    }
    Ok(out)
}

fn two_term_from_file(alg: &AlgRef, f: &TwoTermFile) -> Result<TwoTermComplex> {
    let p1 = expand_mults(alg, &f.p1, "p1")?;
    let p0 = expand_mults(alg, &f.p0, "p0")?;
    let dim = alg.dim();
    let d: crate::twoterm::EltMat = if f.d.is_empty() {
        vec![vec![Elt { c: vec![0; dim] }; p0.len()]; p1.len()]
    } else {
        if f.d.len() != p1.len() || f.d.iter().any(|row| row.len() != p0.len()) {
            return Err(Error::ShapeMismatch {
                what: format!("differential must be {} x {}", p1.len(), p0.len()),
            });
        }
        f.d.iter()
            .map(|row| {
                row.iter()
                    .map(|entry| {
                        if entry.len() != dim {
                            return Err(Error::ShapeMismatch {
                                what: format!(
                                    "differential entries are coefficient vectors of length {dim}"
                                ),
                            });
                        }
                        Ok(Elt { c: entry.iter().map(|&e| e % alg.p).collect() })
                    })
                    .collect::<Result<Vec<Elt>>>()
            })
            .collect::<Result<Vec<Vec<Elt>>>>()?
    };
    TwoTermComplex::new(alg.clone(), p1, p0, d)
}

/// Parse a two-term complex literal over `alg` from JSON text.
pub fn two_term_from_str(alg: &AlgRef, text: &str) -> Result<TwoTermComplex> {
    let f: TwoTermFile =
        serde_json::from_str(text).map_err(|e| Error::Input(format!("two-term JSON: {e}")))?;
    two_term_from_file(alg, &f)
}

fn mult_map(alg: &Algebra, verts: &[usize]) -> VertMults {
    let mut counts: Vec<(u32, usize)> = Vec::new();
    for &v in verts {
        let id = alg.quiver.vertex_ids[v];
        match counts.iter_mut().find(|(k, _)| *k == id) {
            Some((_, n)) => *n += 1,
            None => counts.push((id, 1)),
        }
    }
    counts.sort();
    let mut map = VertMults::new();
    for (id, n) in counts {
        map.insert(id.to_string(), serde_json::Value::from(n as u64));
    }
    map
}

/// Canonical JSON dump of a two-term complex. Generators are re-indexed into
/// the canonical order (sorted by external vertex id), an isomorphic
/// re-presentation; parsing the dump back yields an isomorphic complex.
pub fn two_term_to_json(c: &TwoTermComplex) -> String {
    let alg = &c.alg;
    let key = |&v: &usize| alg.quiver.vertex_ids[v];
    let mut rows: Vec<usize> = (0..c.p1.len()).collect();
    rows.sort_by_key(|&i| key(&c.p1[i]));
    let mut cols: Vec<usize> = (0..c.p0.len()).collect();
    cols.sort_by_key(|&j| key(&c.p0[j]));
    let f = TwoTermFile {
        p1: mult_map(alg, &c.p1),
        p0: mult_map(alg, &c.p0),
        d: rows
            .iter()
            .map(|&i| cols.iter().map(|&j| c.d[i][j].c.clone()).collect())
            .collect(),
    };
    serde_json::to_string_pretty(&f).expect("two-term file serializes") + "\n"
}

/// Parse a subcategory: a JSON array of two-term literals, or an object with
/// an `objects` array.
pub fn parse_subcategory(alg: &AlgRef, text: &str) -> Result<Vec<TwoTermComplex>> {
    let v: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::Input(format!("subcategory JSON: {e}")))?;
    let items = match &v {
        serde_json::Value::Array(a) => a.as_slice(),
        serde_json::Value::Object(o) => match o.get("objects").and_then(|x| x.as_array()) {
            Some(a) => a.as_slice(),
            None => {
                return Err(Error::Input(
                    "subcategory object needs an \"objects\" array".into(),
                ))
            }
        },
        _ => {
            return Err(Error::Input(
                "subcategory must be a JSON array or an object with \"objects\"".into(),
            ))
        }
    };
    items
        .iter()
        .map(|item| {
            let f: TwoTermFile = serde_json::from_value(item.clone())
                .map_err(|e| Error::Input(format!("two-term JSON: {e}")))?;
            two_term_from_file(alg, &f)
        })
        .collect()
}

/* # Exchange-graph emission */

/// Human-readable label for one summand: shifted stalks as `[v]` by external
/// vertex id, everything else by the dimension vector of its zeroth homology.
pub fn summand_label(c: &TwoTermComplex) -> String {
    let h = c.h0();
    if h.dims.iter().all(|&d| d == 0) {
        let ids: Vec<String> =
            c.p1.iter().map(|&v| c.alg.quiver.vertex_ids[v].to_string()).collect();
        format!("[{}]", ids.join(","))
    } else {
        let dims: Vec<String> = h.dims.iter().map(|d| d.to_string()).collect();
        format!("({})", dims.join(","))
    }
}

/// Display label for a class: summand labels joined by ` + `, `0` if empty.
pub fn class_label(t: &TtClass) -> String {
    if t.members.is_empty() {
        return "0".into();
    }
    let parts: Vec<String> = t.members.iter().map(summand_label).collect();
    parts.join(" + ")
}

/// Injective sort key for a class (labels alone may collide).
pub fn class_sort_key(t: &TtClass) -> String {
    let fps: Vec<_> = t.members.iter().map(|c| c.fingerprint()).collect();
    format!("{fps:?}")
}

fn sorted_vertex_order(g: &ExchangeGraph) -> (Vec<usize>, Vec<usize>) {
    let keys: Vec<String> = g.vertices.iter().map(class_sort_key).collect();
    let mut order: Vec<usize> = (0..g.vertices.len()).collect();
    order.sort_by(|&a, &b| keys[a].cmp(&keys[b]));
    let mut pos = vec![0; order.len()];
    for (new, &old) in order.iter().enumerate() {
        pos[old] = new;
    }
    (order, pos)
}

/// Render an exchange graph as DOT. Vertices are sorted by a canonical key,
/// and each edge points from its Bongartz-side endpoint (the one generating
/// the larger torsion class) to its co-Bongartz-side endpoint, with both
/// roles spelled out on the edge. Byte-identical for equal graphs.
pub fn emit_dot(g: &ExchangeGraph) -> String {
    let (order, pos) = sorted_vertex_order(g);
    let mut out = String::from("digraph exchange {\n");
    out.push_str("    rankdir=LR;\n");
    out.push_str("    node [shape=box];\n");
    for (new, &old) in order.iter().enumerate() {
        let _ = writeln!(out, "    n{new} [label=\"{}\"];", class_label(&g.vertices[old]));
    }
    let mut edges: Vec<(usize, usize)> =
        g.edges.iter().map(|e| (pos[e.bongartz_side], pos[e.co_bongartz_side])).collect();
    edges.sort();
    for (b, c) in edges {
        let _ = writeln!(
            out,
            "    n{b} -> n{c} [taillabel=\"Bongartz-side\", headlabel=\"co-Bongartz-side\"];"
        );
    }
    out.push_str("}\n");
    out
}

/// Render an exchange graph as versioned JSON, using the same canonical
/// vertex order as [`emit_dot`].
pub fn graph_to_json(g: &ExchangeGraph) -> String {
    let (order, pos) = sorted_vertex_order(g);
    let mut root = serde_json::Map::new();
    root.insert("schema".into(), 1u32.into());
    root.insert("complete".into(), g.complete.into());
    if let Some(note) = &g.note {
        root.insert("note".into(), note.clone().into());
    }
    let vertices: Vec<serde_json::Value> = order
        .iter()
        .map(|&old| {
            let t = &g.vertices[old];
            let mut v = serde_json::Map::new();
            v.insert("label".into(), class_label(t).into());
            v.insert("summands".into(), (t.members.len() as u64).into());
            serde_json::Value::Object(v)
        })
        .collect();
    root.insert("vertices".into(), vertices.into());
    let mut edges: Vec<(usize, usize)> =
        g.edges.iter().map(|e| (pos[e.bongartz_side], pos[e.co_bongartz_side])).collect();
    edges.sort();
    let edges: Vec<serde_json::Value> = edges
        .into_iter()
        .map(|(b, c)| {
            let mut e = serde_json::Map::new();
            e.insert("bongartz_side".into(), (b as u64).into());
            e.insert("co_bongartz_side".into(), (c as u64).into());
            serde_json::Value::Object(e)
        })
        .collect();
    root.insert("edges".into(), edges.into());
    serde_json::to_string_pretty(&serde_json::Value::Object(root))
        .expect("graph serializes")
        + "\n"
}

/* # Tests */

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rtilt::{exchange_graph, GraphBudget};
    use crate::twoterm::is_iso_tt;

    fn a2() -> AlgRef {
        Algebra::build(Quiver::linear(2), &[], DEFAULT_PRIME).unwrap()
    }

    /// A₃ with both length-two compositions killed.
    fn a3_rad2_text() -> &'static str {
        "vertices = [1, 2, 3]\n\
         arrows = [\n\
             { id = 1, from = 1, to = 2 },\n\
             { id = 2, from = 2, to = 3 },\n\
         ]\n\
         relations = [\n\
             [{ coeff = 1, path = [1, 2] }],\n\
         ]\n"
    }

    #[test]
    fn algebra_toml_dump_is_byte_idempotent() {
        let alg = algebra_from_str(a3_rad2_text(), DEFAULT_PRIME).unwrap();
        assert_eq!(alg.dim(), 5);
        assert_eq!(alg.relations.len(), 1);
        let dump = algebra_to_toml(&alg);
        let again = algebra_from_str(&dump, 7).unwrap(); // prime key wins over default
        assert_eq!(again.p, DEFAULT_PRIME);
        assert_eq!(algebra_to_toml(&again), dump);
        assert_eq!(again.quiver.vertex_ids, alg.quiver.vertex_ids);
        assert_eq!(again.dim(), alg.dim());
    }

    #[test]
    fn algebra_json_is_accepted_and_idempotent() {
        let alg = algebra_from_str(a3_rad2_text(), DEFAULT_PRIME).unwrap();
        let json = algebra_to_json(&alg);
        let again = algebra_from_str(&json, DEFAULT_PRIME).unwrap();
        assert_eq!(algebra_to_json(&again), json);
        assert_eq!(algebra_to_toml(&again), algebra_to_toml(&alg));
        assert_eq!(again.dim(), 5);
    }

    #[test]
    fn algebra_parse_guards() {
        let dup_vertex = "vertices = [1, 1]\n";
        assert!(matches!(
            algebra_from_str(dup_vertex, DEFAULT_PRIME),
            Err(Error::Input(_))
        ));
        let dup_arrow = "vertices = [1, 2]\n\
             arrows = [{ id = 1, from = 1, to = 2 }, { id = 1, from = 2, to = 1 }]\n";
        assert!(matches!(algebra_from_str(dup_arrow, DEFAULT_PRIME), Err(Error::Input(_))));
        let bad_vertex = "vertices = [1, 2]\narrows = [{ id = 1, from = 1, to = 9 }]\n";
        assert!(matches!(
            algebra_from_str(bad_vertex, DEFAULT_PRIME),
            Err(Error::UnknownVertex(_))
        ));
        let bad_prime = "vertices = [1]\nprime = 10\n";
        assert!(matches!(algebra_from_str(bad_prime, DEFAULT_PRIME), Err(Error::NotPrime(10))));
        let typo = "vertices = [1]\nprmie = 7\n";
        assert!(matches!(algebra_from_str(typo, DEFAULT_PRIME), Err(Error::Input(_))));
        assert!(matches!(algebra_from_str("] nonsense", DEFAULT_PRIME), Err(Error::Input(_))));
        assert!(matches!(algebra_from_str("{ nonsense", DEFAULT_PRIME), Err(Error::Input(_))));
    }

    #[test]
    fn session_prime_reads_the_environment() {
        // One test owns the variable so cases cannot race each other.
        std::env::remove_var(PRIME_ENV_VAR);
        assert_eq!(session_prime().unwrap(), DEFAULT_PRIME);
        std::env::set_var(PRIME_ENV_VAR, "101");
        assert_eq!(session_prime().unwrap(), 101);
        std::env::set_var(PRIME_ENV_VAR, "10");
        assert!(matches!(session_prime(), Err(Error::NotPrime(10))));
        std::env::set_var(PRIME_ENV_VAR, "abc");
        assert!(matches!(session_prime(), Err(Error::Input(_))));
        std::env::set_var(PRIME_ENV_VAR, "");
        assert_eq!(session_prime().unwrap(), DEFAULT_PRIME);
        std::env::remove_var(PRIME_ENV_VAR);
    }

    #[test]
    fn module_literals_round_trip() {
        let alg = a2();
        // The indecomposable projective with top at the first vertex.
        let text = r#"{"dims": [1, 1], "matrices": [[[1]]]}"#;
        let m = rep_from_str(&alg, text).unwrap();
        assert_eq!(m.dims, vec![1, 1]);
        let dump = rep_to_json(&m);
        let again = rep_from_str(&alg, &dump).unwrap();
        assert_eq!(rep_to_json(&again), dump);
        assert_eq!(again.dims, m.dims);

        // Entries reduce mod p: 32004 = 1.
        let big = r#"{"dims": [1, 1], "matrices": [[[32004]]]}"#;
        let mb = rep_from_str(&alg, big).unwrap();
        assert_eq!(rep_to_json(&mb), dump);

        // Zero-width matrices for a simple at the first vertex.
        let simple = r#"{"dims": [1, 0], "matrices": [[[]]]}"#;
        let s = rep_from_str(&alg, simple).unwrap();
        assert_eq!(s.dims, vec![1, 0]);
    }

    #[test]
    fn module_literal_guards() {
        let alg = a2();
        let bad_dims = r#"{"dims": [1], "matrices": []}"#;
        assert!(matches!(rep_from_str(&alg, bad_dims), Err(Error::ShapeMismatch { .. })));
        let bad_count = r#"{"dims": [1, 1], "matrices": []}"#;
        assert!(matches!(rep_from_str(&alg, bad_count), Err(Error::ShapeMismatch { .. })));
        let bad_shape = r#"{"dims": [1, 1], "matrices": [[[1, 2]]]}"#;
        assert!(matches!(rep_from_str(&alg, bad_shape), Err(Error::ShapeMismatch { .. })));
        let not_json = "dims = [1, 1]";
        assert!(matches!(rep_from_str(&alg, not_json), Err(Error::Input(_))));
    }

    #[test]
    fn two_term_literals_round_trip() {
        let alg = a2();
        // Presentation of the simple at the first vertex: P_2 -> P_1.
        let pres = two_term_from_str(
            &alg,
            r#"{"p1": {"2": 1}, "p0": {"1": 1}, "d": [[[0, 0, 1]]]}"#,
        )
        .unwrap();
        assert_eq!(pres.h0().dims, vec![1, 0]);
        let dump = two_term_to_json(&pres);
        let again = two_term_from_str(&alg, &dump).unwrap();
        assert!(is_iso_tt(&pres, &again));
        assert_eq!(two_term_to_json(&again), dump);

        // Omitted d means the zero differential; a shifted stalk.
        let shifted = two_term_from_str(&alg, r#"{"p1": {"1": 1}}"#).unwrap();
        assert!(is_iso_tt(&shifted, &TwoTermComplex::shifted_stalk(alg.clone(), 0)));
        let sdump = two_term_to_json(&shifted);
        let sagain = two_term_from_str(&alg, &sdump).unwrap();
        assert!(is_iso_tt(&shifted, &sagain));

        // A complex built with generators out of canonical order dumps to the
        // re-indexed (isomorphic) presentation.
        let scrambled = TwoTermComplex::new(
            alg.clone(),
            vec![1, 0],
            vec![],
            vec![vec![], vec![]],
        )
        .unwrap();
        let sorted = two_term_from_str(&alg, &two_term_to_json(&scrambled)).unwrap();
        assert_eq!(sorted.p1, vec![0, 1]);
        assert!(is_iso_tt(&scrambled, &sorted));
    }

    #[test]
    fn two_term_literal_guards() {
        let alg = a2();
        let bad_key = r#"{"p1": {"x": 1}}"#;
        assert!(matches!(two_term_from_str(&alg, bad_key), Err(Error::Input(_))));
        let bad_vertex = r#"{"p1": {"9": 1}}"#;
        assert!(matches!(two_term_from_str(&alg, bad_vertex), Err(Error::UnknownVertex(_))));
        let bad_shape = r#"{"p1": {"2": 1}, "p0": {"1": 1}, "d": [[[0, 0, 1], [0, 0, 1]]]}"#;
        assert!(matches!(two_term_from_str(&alg, bad_shape), Err(Error::ShapeMismatch { .. })));
        let bad_len = r#"{"p1": {"2": 1}, "p0": {"1": 1}, "d": [[[1]]]}"#;
        assert!(matches!(two_term_from_str(&alg, bad_len), Err(Error::ShapeMismatch { .. })));
        // Unsupported entry: no path from the second vertex to itself except
        // the trivial one, and none from the first to the second.
        let bad_support = r#"{"p1": {"1": 1}, "p0": {"2": 1}, "d": [[[1, 0, 0]]]}"#;
        assert!(matches!(two_term_from_str(&alg, bad_support), Err(Error::Input(_))));
    }

    #[test]
    fn subcategory_accepts_both_shapes() {
        let alg = a2();
        let bare = r#"[{"p1": {"2": 1}, "p0": {"1": 1}, "d": [[[0, 0, 1]]]}, {"p1": {"1": 1}}]"#;
        let objs = parse_subcategory(&alg, bare).unwrap();
        assert_eq!(objs.len(), 2);
        let wrapped = format!("{{\"objects\": {bare}}}");
        let objs2 = parse_subcategory(&alg, &wrapped).unwrap();
        assert_eq!(objs2.len(), 2);
        for (a, b) in objs.iter().zip(&objs2) {
            assert!(is_iso_tt(a, b));
        }
        assert!(matches!(parse_subcategory(&alg, "{}"), Err(Error::Input(_))));
        assert!(matches!(parse_subcategory(&alg, "3"), Err(Error::Input(_))));
    }

    #[test]
    fn dot_and_json_graph_emission_is_deterministic() {
        let alg = a2();
        let budget = GraphBudget::default();
        let g1 = exchange_graph(&alg, &budget).unwrap();
        let g2 = exchange_graph(&alg, &budget).unwrap();
        let dot = emit_dot(&g1);
        assert_eq!(dot, emit_dot(&g2), "dot output must be byte-identical");
        assert_eq!(dot.matches("[label=").count(), 5, "5 node lines");
        assert_eq!(dot.matches(" -> ").count(), 5);
        assert_eq!(dot.matches("Bongartz-side").count(), 10, "both roles on all 5 edges");
        assert!(dot.starts_with("digraph exchange {\n"));
        assert!(dot.ends_with("}\n"));

        let json = graph_to_json(&g1);
        assert_eq!(json, graph_to_json(&g2));
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["complete"], true);
        assert_eq!(v["vertices"].as_array().unwrap().len(), 5);
        assert_eq!(v["edges"].as_array().unwrap().len(), 5);
        let e0 = &v["edges"][0];
        assert!(e0.get("bongartz_side").is_some() && e0.get("co_bongartz_side").is_some());
    }

    #[test]
    fn class_labels_name_summands() {
        let alg = a2();
        let (classes, complete) = crate::rtilt::sttilt_classes(&alg, &GraphBudget::default()).unwrap();
        assert!(complete);
        let labels: BTreeSet<String> = classes.iter().map(class_label).collect();
        assert_eq!(labels.len(), 5, "labels separate the five classes");
        assert!(labels.contains("(1,1) + (0,1)"), "projectives: {labels:?}");
        assert!(labels.contains("[1] + [2]"), "fully shifted class: {labels:?}");
    }

    #[test]
    fn empty_graph_renders_header_and_footer_only() {
        let g = ExchangeGraph {
            vertices: Vec::new(),
            edges: Vec::new(),
            complete: true,
            note: None,
        };
        assert_eq!(
            emit_dot(&g),
            "digraph exchange {\n    rankdir=LR;\n    node [shape=box];\n}\n"
        );
        let v: serde_json::Value = serde_json::from_str(&graph_to_json(&g)).unwrap();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["vertices"].as_array().unwrap().len(), 0);
        assert_eq!(v["edges"].as_array().unwrap().len(), 0);
    }
}
