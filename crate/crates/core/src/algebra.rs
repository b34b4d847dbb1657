//! Bound quiver algebras with a confluent normal-form path basis.
//!
//! A quiver plus admissible relations is turned into a finite-dimensional
//! algebra by rewriting: each relation is oriented so its largest word (in
//! degree-lexicographic order) rewrites to the rest, the rule set is checked
//! for confluence by resolving every overlap ambiguity, and the basis is the
//! set of irreducible paths. Paths compose left to right: `pq` means
//! "p then q", and a path with source u and target w lives in e_u·A·e_w.
//! Modules elsewhere in the crate are right modules.

use crate::error::{Error, Result};
use crate::fp::{self, fadd, fmul, fneg, is_prime, Mat};
use std::cell::OnceCell;
use std::collections::HashMap;
use std::rc::Rc;

/* # Quiver */

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    /// External id as it appears in input files.
    pub id: u32,
    /// Internal source vertex index.
    pub from: usize,
    /// Internal target vertex index.
    pub to: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    /// External vertex ids; the internal index of a vertex is its position.
    pub vertex_ids: Vec<u32>,
    pub arrows: Vec<Arrow>,
}

impl Quiver {
    pub fn n_vertices(&self) -> usize {
        self.vertex_ids.len()
    }

    pub fn vertex_index(&self, id: u32) -> Result<usize> {
        self.vertex_ids
            .iter()
            .position(|&v| v == id)
            .ok_or_else(|| Error::UnknownVertex(id.to_string()))
    }

    pub fn arrow_index(&self, id: u32) -> Result<usize> {
        self.arrows
            .iter()
            .position(|a| a.id == id)
            .ok_or_else(|| Error::Input(format!("unknown arrow {id}")))
    }

    /// The linear quiver 1 → 2 → ... → n with arrow i joining i to i+1.
    pub fn linear(n: usize) -> Quiver {
        Quiver {
            vertex_ids: (1..=n as u32).collect(),
            arrows: (0..n.saturating_sub(1))
                .map(|i| Arrow { id: i as u32 + 1, from: i, to: i + 1 })
                .collect(),
        }
    }
}

/* # Words and rewriting */

/// A path in normal form: a source vertex and a composable arrow sequence.
/// The empty sequence is the trivial path at `source`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PathWord {
    pub source: usize,
    pub arrows: Vec<usize>,
}

impl PathWord {
    pub fn trivial(v: usize) -> PathWord {
        PathWord { source: v, arrows: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn target(&self, q: &Quiver) -> usize {
        self.arrows.last().map_or(self.source, |&a| q.arrows[a].to)
    }
}

/// Degree-lexicographic comparison of arrow words: longer is larger, ties by
/// the arrow index sequence. This is the term order that picks rule leads.
fn deglex(a: &[usize], b: &[usize]) -> std::cmp::Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

#[derive(Clone, Debug)]
struct Rule {
    lead: Vec<usize>,
    /// Linear combination the lead rewrites to; every word strictly smaller.
    tail: Vec<(u64, Vec<usize>)>,
}

/// A relation as stored: terms (coefficient, arrow index word).
pub type Relation = Vec<(u64, Vec<usize>)>;

/* # The algebra */

#[derive(Debug)]
pub struct Algebra {
    pub p: u64,
    pub quiver: Quiver,
    /// Normalized input relations (coefficients reduced, like terms merged).
    pub relations: Vec<Relation>,
    /// Normal-form path basis: trivial paths first (by vertex index), then
    /// by length and lexicographic arrow order.
    pub basis: Vec<PathWord>,
    index: HashMap<PathWord, usize>,
    /// Basis path indices grouped by (source vertex, target vertex).
    pub paths_from_to: Vec<Vec<Vec<usize>>>,
    /// Sparse multiplication table: table[i][j] = basis expansion of b_i·b_j.
    table: Vec<Vec<Vec<(usize, u64)>>>,
    rules: Vec<Rule>,
    op_cache: OnceCell<AlgRef>,
}

/// All algebra values are handed around behind an Rc so modules and
/// complexes can share one copy.
pub type AlgRef = Rc<Algebra>;

/// An algebra element as a dense coefficient vector over the path basis.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Elt {
    pub c: Vec<u64>,
}

impl std::fmt::Debug for Elt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Elt{:?}", self.c)
    }
}

impl Algebra {
    /// Build the algebra from a quiver and relations over F_p.
    ///
    /// Relations must be linear combinations of parallel paths of length at
    /// least two. The derived rewriting system must pass the overlap check,
    /// the irreducible-path basis must be finite, and dim < p must hold.
    pub fn build(quiver: Quiver, raw_relations: &[Vec<(i64, Vec<u32>)>], p: u64) -> Result<AlgRef> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        // Translate arrow ids to indices and validate shape.
        let mut relations: Vec<Relation> = Vec::new();
        for rel in raw_relations {
            let mut terms: Vec<(u64, Vec<usize>)> = Vec::new();
            for (coeff, path_ids) in rel {
                let mut word = Vec::with_capacity(path_ids.len());
                for &aid in path_ids {
                    word.push(quiver.arrow_index(aid)?);
                }
                validate_composable(&quiver, &word)?;
                if word.len() < 2 {
                    return Err(Error::Input(
                        "relation terms must be paths of length at least 2".into(),
                    ));
                }
                let c = fp::norm(p, *coeff);
                if c != 0 {
                    terms.push((c, word));
                }
            }
            let terms = merge_terms(p, terms);
            if terms.is_empty() {
                continue;
            }
            // All terms must be parallel.
            let (s0, t0) = ends(&quiver, &terms[0].1);
            for (_, w) in &terms {
                if ends(&quiver, w) != (s0, t0) {
                    return Err(Error::Input("relation terms are not parallel paths".into()));
                }
            }
            relations.push(terms);
        }

        let rules = orient_rules(p, &relations);
        check_confluence(p, &quiver, &rules)?;

        let (basis, index, paths_from_to) = enumerate_basis(&quiver, &rules, p)?;
        let dim = basis.len();
        if dim as u64 >= p {
            return Err(Error::DimensionExceedsPrime { dim, p });
        }

        let mut alg = Algebra {
            p,
            quiver,
            relations,
            basis,
            index,
            paths_from_to,
            table: Vec::new(),
            rules,
            op_cache: OnceCell::new(),
        };
        alg.table = alg.build_table();
        if dim <= 50 {
            alg.check_associativity()?;
        }
        Ok(Rc::new(alg))
    }

    /// Path algebra of the linear quiver 1 → ... → n.
    pub fn linear_an(n: usize, p: u64) -> AlgRef {
        Algebra::build(Quiver::linear(n), &[], p).expect("hereditary linear quiver")
    }

    /// Linear quiver with every path of length `nil` equal to zero.
    pub fn linear_an_nilpotent(n: usize, nil: usize, p: u64) -> AlgRef {
        let q = Quiver::linear(n);
        let mut rels: Vec<Vec<(i64, Vec<u32>)>> = Vec::new();
        for start in 0..q.arrows.len().saturating_sub(nil - 1) {
            let word: Vec<u32> = (start..start + nil).map(|i| q.arrows[i].id).collect();
            rels.push(vec![(1, word)]);
        }
        Algebra::build(q, &rels, p).expect("monomial truncation")
    }

    /// The opposite algebra: arrows reversed, relation words reversed.
    /// The reversed rule set must itself pass the confluence check; monomial
    /// relation sets always do. The result is cached.
    pub fn opposite(&self) -> Result<AlgRef> {
        if let Some(op) = self.op_cache.get() {
            return Ok(op.clone());
        }
        let op = self.opposite_uncached()?;
        let _ = self.op_cache.set(op.clone());
        Ok(op)
    }

    fn opposite_uncached(&self) -> Result<AlgRef> {
        let quiver = Quiver {
            vertex_ids: self.quiver.vertex_ids.clone(),
            arrows: self
                .quiver
                .arrows
                .iter()
                .map(|a| Arrow { id: a.id, from: a.to, to: a.from })
                .collect(),
        };
        let relations: Vec<Vec<(i64, Vec<u32>)>> = self
            .relations
            .iter()
            .map(|rel| {
                rel.iter()
                    .map(|(c, w)| {
                        let ids: Vec<u32> =
                            w.iter().rev().map(|&ai| self.quiver.arrows[ai].id).collect();
                        (*c as i64, ids)
                    })
                    .collect()
            })
            .collect();
        Algebra::build(quiver, &relations, self.p)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn n_vertices(&self) -> usize {
        self.quiver.n_vertices()
    }

    pub fn basis_index(&self, w: &PathWord) -> Option<usize> {
        self.index.get(w).copied()
    }

    /// The element that is the i-th basis path with coefficient one.
    pub fn basis_elt(&self, i: usize) -> Elt {
        let mut e = self.zero_elt();
        e.c[i] = 1;
        e
    }

    /* # Elements */

    pub fn zero_elt(&self) -> Elt {
        Elt { c: vec![0; self.dim()] }
    }

    /// The local unit e_v.
    pub fn unit(&self, v: usize) -> Elt {
        let mut e = self.zero_elt();
        let i = self.basis_index(&PathWord::trivial(v)).expect("trivial path in basis");
        e.c[i] = 1;
        e
    }

    /// The element of a single arrow.
    pub fn arrow_elt(&self, arrow: usize) -> Elt {
        let q = &self.quiver;
        let w = PathWord { source: q.arrows[arrow].from, arrows: vec![arrow] };
        let mut e = self.zero_elt();
        match self.basis_index(&w) {
            Some(i) => e.c[i] = 1,
            None => {
                // An arrow can only be missing from the basis if a length-1
                // lead existed, which the relation validation forbids.
                unreachable!("arrows are always irreducible")
            }
        }
        e
    }

    /// Reduce an arbitrary arrow word to an element.
    pub fn elt_from_word(&self, source: usize, word: &[usize]) -> Result<Elt> {
        validate_composable_from(&self.quiver, source, word)?;
        let mut e = self.zero_elt();
        for (c, w) in reduce_word(self.p, &self.rules, word) {
            let pw = PathWord { source, arrows: w };
            let i = self.basis_index(&pw).expect("reduced word is in basis");
            e.c[i] = fadd(self.p, e.c[i], c);
        }
        Ok(e)
    }

    pub fn elt_add(&self, x: &Elt, y: &Elt) -> Elt {
        let mut z = x.clone();
        for (a, &b) in z.c.iter_mut().zip(y.c.iter()) {
            *a = fadd(self.p, *a, b);
        }
        z
    }

    pub fn elt_scale(&self, x: &Elt, s: u64) -> Elt {
        let mut z = x.clone();
        for a in z.c.iter_mut() {
            *a = fmul(self.p, *a, s);
        }
        z
    }

    pub fn elt_neg(&self, x: &Elt) -> Elt {
        let mut z = x.clone();
        for a in z.c.iter_mut() {
            *a = fneg(self.p, *a);
        }
        z
    }

    /// Product x·y ("x then y" on paths).
    pub fn elt_mul(&self, x: &Elt, y: &Elt) -> Elt {
        let mut z = self.zero_elt();
        for (i, &xi) in x.c.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.c.iter().enumerate() {
                if yj == 0 {
                    continue;
                }
                let f = fmul(self.p, xi, yj);
                for &(k, ck) in &self.table[i][j] {
                    z.c[k] = fadd(self.p, z.c[k], fmul(self.p, f, ck));
                }
            }
        }
        z
    }

    pub fn elt_is_zero(&self, x: &Elt) -> bool {
        x.c.iter().all(|&v| v == 0)
    }

    /// Coefficient of the trivial path e_v inside x (x assumed in e_v·A·e_v).
    pub fn unit_coefficient(&self, x: &Elt, v: usize) -> u64 {
        let i = self.basis_index(&PathWord::trivial(v)).expect("trivial path");
        x.c[i]
    }

    /// Inverse of x inside the corner ring e_v·A·e_v, when it exists.
    /// The corner ring is local, so x is invertible exactly when its
    /// trivial-path coefficient is nonzero; the inverse is found by a
    /// linear solve on the corner basis.
    pub fn elt_local_inverse(&self, x: &Elt, v: usize) -> Option<Elt> {
        if self.unit_coefficient(x, v) == 0 {
            return None;
        }
        let corner = &self.paths_from_to[v][v];
        let n = corner.len();
        // Left-multiplication by x on the corner basis: L[c][r] holds the
        // q_r coefficient of x·q_c, so that (row coords of y)·L = coords of x·y.
        let mut lmul = Mat::zeros(self.p, n, n);
        for (c, &g) in corner.iter().enumerate() {
            let prod = self.elt_mul(x, &self.basis_elt(g));
            for (r, &h) in corner.iter().enumerate() {
                lmul[(c, r)] = prod.c[h];
            }
        }
        let mut unit = Mat::zeros(self.p, 1, n);
        let triv = self.basis_index(&PathWord::trivial(v)).expect("trivial path");
        for (r, &h) in corner.iter().enumerate() {
            if h == triv {
                unit[(0, r)] = 1;
            }
        }
        let sol = lmul.solve_left(&unit).ok()??;
        let mut y = self.zero_elt();
        for (c, &g) in corner.iter().enumerate() {
            y.c[g] = sol[(0, c)];
        }
        debug_assert_eq!(self.elt_mul(x, &y).c, self.unit(v).c);
        debug_assert_eq!(self.elt_mul(&y, x).c, self.unit(v).c);
        Some(y)
    }

    /* # Internals */

    fn build_table(&self) -> Vec<Vec<Vec<(usize, u64)>>> {
        let dim = self.dim();
        let q = &self.quiver;
        let mut table = vec![vec![Vec::new(); dim]; dim];
        for i in 0..dim {
            for j in 0..dim {
                let bi = &self.basis[i];
                let bj = &self.basis[j];
                if bi.target(q) != bj.source {
                    continue;
                }
                let mut word = bi.arrows.clone();
                word.extend_from_slice(&bj.arrows);
                let mut out: Vec<(usize, u64)> = Vec::new();
                for (c, w) in reduce_word(self.p, &self.rules, &word) {
                    let pw = PathWord { source: bi.source, arrows: w };
                    let k = self.index[&pw];
                    out.push((k, c));
                }
                out.sort_unstable();
                table[i][j] = out;
            }
        }
        table
    }

    fn check_associativity(&self) -> Result<()> {
        let dim = self.dim();
        for i in 0..dim {
            let ei = {
                let mut e = self.zero_elt();
                e.c[i] = 1;
                e
            };
            for j in 0..dim {
                let ej = {
                    let mut e = self.zero_elt();
                    e.c[j] = 1;
                    e
                };
                let ij = self.elt_mul(&ei, &ej);
                for k in 0..dim {
                    let ek = {
                        let mut e = self.zero_elt();
                        e.c[k] = 1;
                        e
                    };
                    let left = self.elt_mul(&ij, &ek);
                    let right = self.elt_mul(&ei, &self.elt_mul(&ej, &ek));
                    if left != right {
                        return Err(Error::CrossCheck(format!(
                            "multiplication table not associative at basis triple ({i},{j},{k})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

fn ends(q: &Quiver, word: &[usize]) -> (usize, usize) {
    let s = q.arrows[word[0]].from;
    let t = q.arrows[*word.last().unwrap()].to;
    (s, t)
}

fn validate_composable(q: &Quiver, word: &[usize]) -> Result<()> {
    if word.is_empty() {
        return Err(Error::Input("empty relation path".into()));
    }
    validate_composable_from(q, q.arrows[word[0]].from, word)
}

fn validate_composable_from(q: &Quiver, source: usize, word: &[usize]) -> Result<()> {
    let mut at = source;
    for &a in word {
        let arr = q.arrows.get(a).ok_or_else(|| Error::Input(format!("bad arrow index {a}")))?;
        if arr.from != at {
            return Err(Error::Input("path is not composable".into()));
        }
        at = arr.to;
    }
    Ok(())
}

fn merge_terms(p: u64, terms: Vec<(u64, Vec<usize>)>) -> Vec<(u64, Vec<usize>)> {
    let mut acc: HashMap<Vec<usize>, u64> = HashMap::new();
    for (c, w) in terms {
        let e = acc.entry(w).or_insert(0);
        *e = fadd(p, *e, c);
    }
    let mut out: Vec<(u64, Vec<usize>)> =
        acc.into_iter().filter(|(_, c)| *c != 0).map(|(w, c)| (c, w)).collect();
    out.sort_by(|a, b| deglex(&a.1, &b.1));
    out
}

/// Orient each relation: the deglex-largest word becomes the lead, rewriting
/// to minus the rest over the lead coefficient.
fn orient_rules(p: u64, relations: &[Relation]) -> Vec<Rule> {
    let mut rules = Vec::new();
    for rel in relations {
        let (lead_c, lead_w) = rel.last().expect("relation nonempty").clone();
        let inv = fp::finv(p, lead_c);
        let tail: Vec<(u64, Vec<usize>)> = rel[..rel.len() - 1]
            .iter()
            .map(|(c, w)| (fmul(p, fneg(p, *c), inv), w.clone()))
            .collect();
        rules.push(Rule { lead: lead_w, tail });
    }
    rules
}

/// Fully reduce a single arrow word, returning its normal form as a linear
/// combination of irreducible words. Rewrites the leftmost-first matching
/// lead; termination is guaranteed because every tail word is deglex-smaller
/// than its lead.
fn reduce_word(p: u64, rules: &[Rule], word: &[usize]) -> Vec<(u64, Vec<usize>)> {
    let mut work: Vec<(u64, Vec<usize>)> = vec![(1, word.to_vec())];
    let mut done: HashMap<Vec<usize>, u64> = HashMap::new();
    while let Some((c, w)) = work.pop() {
        match find_redex(rules, &w) {
            None => {
                let e = done.entry(w).or_insert(0);
                *e = fadd(p, *e, c);
            }
            Some((pos, ri)) => {
                let rule = &rules[ri];
                for (tc, tw) in &rule.tail {
                    let mut nw = Vec::with_capacity(w.len() - rule.lead.len() + tw.len());
                    nw.extend_from_slice(&w[..pos]);
                    nw.extend_from_slice(tw);
                    nw.extend_from_slice(&w[pos + rule.lead.len()..]);
                    work.push((fmul(p, c, *tc), nw));
                }
            }
        }
    }
    let mut out: Vec<(u64, Vec<usize>)> =
        done.into_iter().filter(|(_, c)| *c != 0).map(|(w, c)| (c, w)).collect();
    out.sort_by(|a, b| deglex(&a.1, &b.1));
    out
}

fn find_redex(rules: &[Rule], w: &[usize]) -> Option<(usize, usize)> {
    for pos in 0..w.len() {
        for (ri, rule) in rules.iter().enumerate() {
            let l = rule.lead.len();
            if pos + l <= w.len() && w[pos..pos + l] == rule.lead[..] {
                return Some((pos, ri));
            }
        }
    }
    None
}

/// Diamond-lemma overlap check: every ambiguity (suffix-prefix overlap or
/// containment of one lead in another) must reduce to the same normal form
/// along both one-step resolutions.
fn check_confluence(p: u64, q: &Quiver, rules: &[Rule]) -> Result<()> {
    let resolve = |word: &[usize], pos: usize, ri: usize| -> Vec<(u64, Vec<usize>)> {
        let rule = &rules[ri];
        let mut acc: Vec<(u64, Vec<usize>)> = Vec::new();
        for (tc, tw) in &rule.tail {
            let mut nw = Vec::new();
            nw.extend_from_slice(&word[..pos]);
            nw.extend_from_slice(tw);
            nw.extend_from_slice(&word[pos + rule.lead.len()..]);
            for (c, w) in reduce_word(p, rules, &nw) {
                acc.push((fmul(p, *tc, c), w));
            }
        }
        merge_terms(p, acc)
    };
    for (i, ri) in rules.iter().enumerate() {
        for (j, rj) in rules.iter().enumerate() {
            // Suffix of lead_i equals prefix of lead_j.
            let li = &ri.lead;
            let lj = &rj.lead;
            for o in 1..li.len().min(lj.len()) {
                if li[li.len() - o..] == lj[..o] {
                    let mut word = li.clone();
                    word.extend_from_slice(&lj[o..]);
                    if validate_composable(q, &word).is_err() {
                        continue;
                    }
                    let a = resolve(&word, 0, i);
                    let b = resolve(&word, li.len() - o, j);
                    if a != b {
                        return Err(Error::NotConfluent {
                            diagnostic: format!(
                                "overlap of rule {i} and rule {j} on word {word:?} resolves two ways"
                            ),
                        });
                    }
                }
            }
            // lead_j contained in lead_i (including equal leads for i ≠ j).
            if (i != j || li.len() > lj.len()) && li.len() >= lj.len() {
                for pos in 0..=li.len() - lj.len() {
                    if i == j && pos == 0 && li.len() == lj.len() {
                        continue;
                    }
                    if li[pos..pos + lj.len()] == lj[..] {
                        let a = resolve(li, 0, i);
                        let b = resolve(li, pos, j);
                        if a != b {
                            return Err(Error::NotConfluent {
                                diagnostic: format!(
                                    "rule {j} inside rule {i} at {pos} resolves two ways"
                                ),
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

/// Enumerate irreducible paths breadth-first by length. Irreducible words are
/// closed under subwords, so the first empty length level ends the basis.
/// Growth past the field prime (the dim < p wall) or past twice the basis
/// size found so far is reported as a non-admissible relation set.
fn enumerate_basis(
    q: &Quiver,
    rules: &[Rule],
    p: u64,
) -> Result<(Vec<PathWord>, HashMap<PathWord, usize>, Vec<Vec<Vec<usize>>>)> {
    let nv = q.n_vertices();
    let mut basis: Vec<PathWord> = (0..nv).map(PathWord::trivial).collect();
    let mut level: Vec<PathWord> = basis.clone();
    let mut length = 0usize;
    loop {
        length += 1;
        let mut next: Vec<PathWord> = Vec::new();
        for w in &level {
            let at = w.target(q);
            for (ai, arr) in q.arrows.iter().enumerate() {
                if arr.from != at {
                    continue;
                }
                let mut word = w.arrows.clone();
                word.push(ai);
                // Only a suffix of the extended word can be a new redex.
                let reducible = rules.iter().any(|r| {
                    r.lead.len() <= word.len()
                        && word[word.len() - r.lead.len()..] == r.lead[..]
                });
                if !reducible {
                    next.push(PathWord { source: w.source, arrows: word });
                }
            }
        }
        if next.is_empty() {
            break;
        }
        next.sort();
        basis.extend(next.iter().cloned());
        level = next;
        if basis.len() as u64 >= 4 * p {
            return Err(Error::NotAdmissible(format!(
                "irreducible path basis grew past {} words and is still growing; \
                 the dimension bound dim < {p} cannot be met",
                4 * p
            )));
        }
        if length > 2 * basis.len() {
            return Err(Error::NotAdmissible(format!(
                "irreducible paths of length {length} exceed twice the basis size"
            )));
        }
    }
    // Canonical order: trivial paths by vertex, then by (length, lex).
    basis.sort_by(|a, b| {
        deglex(&a.arrows, &b.arrows).then_with(|| a.source.cmp(&b.source)).then_with(|| a.cmp(b))
    });
    let index: HashMap<PathWord, usize> =
        basis.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
    let mut paths_from_to = vec![vec![Vec::new(); nv]; nv];
    for (i, w) in basis.iter().enumerate() {
        paths_from_to[w.source][w.target(q)].push(i);
    }
    Ok((basis, index, paths_from_to))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a2_path_algebra() {
        let a = Algebra::linear_an(2, 32003);
        assert_eq!(a.dim(), 3);
        assert_eq!(a.basis[0], PathWord::trivial(0));
        assert_eq!(a.basis[1], PathWord::trivial(1));
        assert_eq!(a.basis[2], PathWord { source: 0, arrows: vec![0] });
    }

    #[test]
    fn a3_path_algebra_dimension() {
        let a = Algebra::linear_an(3, 32003);
        assert_eq!(a.dim(), 6);
    }

    #[test]
    fn a4_radical_cube_zero_dimension() {
        let a = Algebra::linear_an_nilpotent(4, 3, 32003);
        assert_eq!(a.dim(), 9);
    }

    #[test]
    fn local_units_multiply() {
        let a = Algebra::linear_an(2, 32003);
        let e1 = a.unit(0);
        assert_eq!(a.elt_mul(&e1, &e1), e1);
        let arr = a.arrow_elt(0);
        let e2 = a.unit(1);
        assert_eq!(a.elt_mul(&arr, &e2), arr);
        assert!(a.elt_is_zero(&a.elt_mul(&e2, &arr)));
        assert_eq!(a.elt_mul(&e1, &arr), arr);
    }

    #[test]
    fn monomial_relation_kills_its_word() {
        // Radical square zero on A3: the single length-2 word x1 x2 is a
        // relation, so the product of the two arrows vanishes.
        let a = Algebra::linear_an_nilpotent(3, 2, 32003);
        let x1 = a.arrow_elt(0);
        let x2 = a.arrow_elt(1);
        assert!(a.elt_is_zero(&a.elt_mul(&x1, &x2)));
        assert_eq!(a.dim(), 5);
    }

    #[test]
    fn radical_cube_truncation_products() {
        let a = Algebra::linear_an_nilpotent(4, 3, 32003);
        let x1 = a.arrow_elt(0);
        let x2 = a.arrow_elt(1);
        let x3 = a.arrow_elt(2);
        let x12 = a.elt_mul(&x1, &x2);
        assert!(!a.elt_is_zero(&x12));
        assert!(a.elt_is_zero(&a.elt_mul(&x12, &x3)));
        assert!(!a.elt_is_zero(&a.elt_mul(&x2, &x3)));
    }

    #[test]
    fn commutativity_relation_reduces() {
        // Diamond quiver: two length-2 paths from 1 to 4 identified.
        let q = Quiver {
            vertex_ids: vec![1, 2, 3, 4],
            arrows: vec![
                Arrow { id: 1, from: 0, to: 1 },
                Arrow { id: 2, from: 0, to: 2 },
                Arrow { id: 3, from: 1, to: 3 },
                Arrow { id: 4, from: 2, to: 3 },
            ],
        };
        let rels = vec![vec![(1, vec![1, 3]), (-1, vec![2, 4])]];
        let a = Algebra::build(q, &rels, 32003).unwrap();
        // Basis: 4 trivial, 4 arrows, 1 surviving length-2 path.
        assert_eq!(a.dim(), 9);
        let p13 = a.elt_from_word(0, &[0, 2]).unwrap();
        let p24 = a.elt_from_word(0, &[1, 3]).unwrap();
        assert_eq!(p13, p24);
        assert!(!a.elt_is_zero(&p13));
    }

    #[test]
    fn non_confluent_rejected() {
        // bd → ac together with de → 0 leaves the overlap b·d·e unresolved.
        let q = Quiver {
            vertex_ids: vec![1, 2, 3, 4, 5],
            arrows: vec![
                Arrow { id: 1, from: 0, to: 1 }, // a
                Arrow { id: 2, from: 0, to: 2 }, // b
                Arrow { id: 3, from: 1, to: 3 }, // c
                Arrow { id: 4, from: 2, to: 3 }, // d
                Arrow { id: 5, from: 3, to: 4 }, // e
            ],
        };
        let rels = vec![
            vec![(1, vec![2, 4]), (-1, vec![1, 3])],
            vec![(1, vec![4, 5])],
        ];
        match Algebra::build(q, &rels, 32003) {
            Err(Error::NotConfluent { .. }) => {}
            other => panic!("expected confluence failure, got {other:?}"),
        }
    }

    #[test]
    fn loop_truncation_is_admissible() {
        let q = Quiver {
            vertex_ids: vec![1],
            arrows: vec![Arrow { id: 1, from: 0, to: 0 }],
        };
        let rels = vec![vec![(1, vec![1, 1, 1])]];
        let a = Algebra::build(q, &rels, 101).unwrap();
        assert_eq!(a.dim(), 3);
    }

    #[test]
    fn free_loop_rejected_as_non_admissible() {
        let q = Quiver {
            vertex_ids: vec![1],
            arrows: vec![Arrow { id: 1, from: 0, to: 0 }],
        };
        match Algebra::build(q, &[], 101) {
            Err(Error::NotAdmissible(_)) => {}
            other => panic!("expected admissibility failure, got {other:?}"),
        }
    }

    #[test]
    fn dimension_must_stay_below_prime() {
        match Algebra::build(Quiver::linear(2), &[], 3) {
            Err(Error::DimensionExceedsPrime { dim: 3, p: 3 }) => {}
            other => panic!("expected dim/prime failure, got {other:?}"),
        }
    }

    #[test]
    fn composite_prime_rejected() {
        match Algebra::build(Quiver::linear(2), &[], 15) {
            Err(Error::NotPrime(15)) => {}
            other => panic!("expected primality failure, got {other:?}"),
        }
    }

    #[test]
    fn opposite_algebra_swaps_hom_directions() {
        let a = Algebra::linear_an(2, 32003);
        let op = a.opposite().unwrap();
        assert_eq!(op.dim(), 3);
        // In the opposite algebra the arrow runs 2 → 1.
        assert_eq!(op.quiver.arrows[0].from, 1);
        assert_eq!(op.quiver.arrows[0].to, 0);
    }

    #[test]
    fn element_from_word_reduces() {
        let a = Algebra::linear_an_nilpotent(4, 3, 32003);
        let z = a.elt_from_word(0, &[0, 1, 2]).unwrap();
        assert!(a.elt_is_zero(&z));
    }
}
