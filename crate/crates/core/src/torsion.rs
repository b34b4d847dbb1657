//! Module-category side of the workbench: factor closures, the two
//! perpendicular tests, support pairs, cotorsion-style pairs with honestly
//! computed condition flags, the factor-order sandwich, the bijection between
//! support pairs and functorially finite torsion classes, and the directed
//! completion through a star product of torsion classes.
//!
//! Everything here works over a complete [`Atlas`]: subcategories closed
//! under sums and summands are represented by sorted lists of atlas indices,
//! and every closure property is verified by exhaustive probing over the
//! atlas rather than assumed.

use crate::algebra::AlgRef;
use crate::atlas::Atlas;
use crate::error::{Error, Result};
use crate::fp::Mat;
use crate::rep::{
    cokernel, decompose_reps, direct_sum, ext1_dim, hom_dim, image_rows, in_fac, is_isomorphic,
    kernel, left_approximation, minimal_presentation, projective_cover, quotient_by_rows,
    subobject_list, trace_rows, ar_translate, Presentation, Rep,
};
use crate::rtilt::{self, TtClass};

/// Default total-dimension cap for subobject enumeration in the star
/// product.  Modules above the cap are refused rather than sampled.
pub const SUBOBJECT_DIM_CAP: usize = 8;

/* # Pairs of modules and support vertices */

/// Finitely many pairwise non-isomorphic indecomposable modules together
/// with a set of vertices whose projectives vanish on all of them.
///
/// Construction enforces both invariants: the module part is rigid in the
/// sense that no member maps nontrivially into a translate of a member
/// (exactly the vanishing of every first extension group out of a member
/// into the factor closure of the collection), and every listed vertex is a
/// genuine zero of the module part.
#[derive(Clone, Debug)]
pub struct TauPair {
    pub alg: AlgRef,
    pub modules: Vec<Rep>,
    /// Sorted, deduplicated vertex list.
    pub e_vertices: Vec<usize>,
}

/// First witness (i, j) with a nonzero hom from modules[i] into the
/// translate of modules[j], if any.
fn translate_hom_witness(mods: &[Rep]) -> Option<(usize, usize)> {
    for (j, m) in mods.iter().enumerate() {
        let t = ar_translate(m);
        if t.is_zero() {
            continue;
        }
        for (i, s) in mods.iter().enumerate() {
            if hom_dim(s, &t) != 0 {
                return Some((i, j));
            }
        }
    }
    None
}

impl TauPair {
    /// Normalize and validate a pair.  Input modules may be decomposable or
    /// zero; they are split into indecomposables and deduplicated up to
    /// isomorphism.
    pub fn new(alg: AlgRef, modules: &[Rep], e_vertices: &[usize]) -> Result<TauPair> {
        let mut mods: Vec<Rep> = Vec::new();
        for m in modules {
            for part in decompose_reps(m)? {
                if part.is_zero() {
                    continue;
                }
                if !mods.iter().any(|k| is_isomorphic(k, &part)) {
                    mods.push(part);
                }
            }
        }
        mods.sort_by(|a, b| (a.total_dim(), &a.dims).cmp(&(b.total_dim(), &b.dims)));
        if let Some((i, j)) = translate_hom_witness(&mods) {
            return Err(Error::NotRigid {
                witness: format!(
                    "module {i} maps nontrivially into the translate of module {j}"
                ),
            });
        }
        let mut e: Vec<usize> = e_vertices.to_vec();
        e.sort_unstable();
        e.dedup();
        for &v in &e {
            if v >= alg.n_vertices() {
                return Err(Error::Input(format!("vertex {v} out of range")));
            }
            if let Some(m) = mods.iter().position(|m| m.dims[v] != 0) {
                return Err(Error::Hypothesis(format!(
                    "support vertex {v} meets module {m} of the pair"
                )));
            }
        }
        Ok(TauPair { alg, modules: mods, e_vertices: e })
    }

    /// The pair read off a two-term collection: cohomology modules of the
    /// non-stalk members plus the vertices of the shifted-stalk members.
    pub fn from_class(x: &TtClass) -> Result<TauPair> {
        TauPair::new(x.alg.clone(), &x.h_modules(), &x.e_part())
    }

    pub fn module_refs(&self) -> Vec<&Rep> {
        self.modules.iter().collect()
    }

    /// Same module set up to isomorphism and the same vertex set.
    pub fn is_same(&self, other: &TauPair) -> bool {
        self.e_vertices == other.e_vertices
            && self.modules.len() == other.modules.len()
            && self.contains_modules(&other.modules)
    }

    /// Does the additive closure of this pair's module part contain every
    /// listed module?
    pub fn contains_modules(&self, mods: &[Rep]) -> bool {
        mods.iter().all(|m| self.modules.iter().any(|k| is_isomorphic(k, m)))
    }

    /// Containment of pairs: module part inside module part, vertex set
    /// inside vertex set.
    pub fn contains(&self, other: &TauPair) -> bool {
        self.contains_modules(&other.modules)
            && other.e_vertices.iter().all(|v| self.e_vertices.contains(v))
    }
}

/* # Torsion classes as atlas subsets */

/// Additively closed atlas subset with honestly computed closure flags.
///
/// `quotient_closed` holds when no atlas module outside the subset is a
/// factor of a sum of members.  `extension_closed` is certified through the
/// trace test below and is exact in conjunction with `quotient_closed`; the
/// two flags together certify a torsion class.
#[derive(Clone, Debug)]
pub struct TorsionClass {
    pub alg: AlgRef,
    /// Sorted atlas indices.
    pub members: Vec<usize>,
    pub quotient_closed: bool,
    pub extension_closed: bool,
}

fn member_refs<'a>(atlas: &'a Atlas, members: &[usize]) -> Vec<&'a Rep> {
    members.iter().map(|&i| &atlas.modules[i]).collect()
}

/// Is the trace of the family idempotent on z?  The trace is the largest
/// submodule generated by images from the family; for a family closed under
/// sums and factors, closure under extensions is equivalent to the trace of
/// the factor z / trace(z) vanishing for every module z, and checking the
/// atlas suffices because the trace commutes with direct sums.
fn trace_idempotent(gens: &[&Rep], z: &Rep) -> bool {
    let rows = trace_rows(gens, z);
    let (q, _proj) = quotient_by_rows(z, &rows);
    if q.is_zero() {
        return true;
    }
    trace_rows(gens, &q).iter().all(|r| r.rows == 0)
}

fn quotient_closed_over(atlas: &Atlas, members: &[usize]) -> bool {
    let refs = member_refs(atlas, members);
    (0..atlas.len())
        .filter(|i| !members.contains(i))
        .all(|i| !in_fac(&atlas.modules[i], &refs))
}

fn extension_closed_over(atlas: &Atlas, members: &[usize]) -> bool {
    let refs = member_refs(atlas, members);
    atlas.modules.iter().all(|z| trace_idempotent(&refs, z))
}

impl TorsionClass {
    /// Wrap a member list and compute both closure flags by probing.
    pub fn from_members(atlas: &Atlas, members: Vec<usize>) -> TorsionClass {
        let mut members = members;
        members.sort_unstable();
        members.dedup();
        let quotient_closed = quotient_closed_over(atlas, &members);
        let extension_closed = quotient_closed && extension_closed_over(atlas, &members);
        TorsionClass { alg: atlas.alg.clone(), members, quotient_closed, extension_closed }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/* # Factor closure and the two perpendiculars */

/// All atlas modules that are factors of finite sums from the generating
/// list, with closure flags.  For a rigid generating list the result is a
/// torsion class, and that expectation is enforced as a cross-check; for a
/// non-rigid list the extension flag simply reports what the probe found.
pub fn fac_closure(s: &[Rep], atlas: &Atlas) -> Result<TorsionClass> {
    atlas.require_complete()?;
    let gens: Vec<&Rep> = s.iter().filter(|m| !m.is_zero()).collect();
    let members: Vec<usize> =
        (0..atlas.len()).filter(|&i| in_fac(&atlas.modules[i], &gens)).collect();
    let class = TorsionClass::from_members(atlas, members);
    if !class.quotient_closed {
        return Err(Error::CrossCheck(
            "a factor closure failed the quotient-closure probe".into(),
        ));
    }
    if translate_hom_witness(s).is_none() && !class.extension_closed {
        return Err(Error::CrossCheck(
            "the factor closure of a rigid list failed the extension-closure probe".into(),
        ));
    }
    Ok(class)
}

/// Does the induced map Hom(P0, a) -> Hom(P1, a) of the presentation
/// surject?  Hom out of a projective summand P_v is the vertex space of `a`
/// at v, and precomposition with the presentation differential acts by the
/// element matrices.
fn presentation_hom_surjective(a: &Rep, pres: &Presentation) -> bool {
    let p = a.alg.p;
    let rows: usize = pres.p0.iter().map(|&v| a.dims[v]).sum();
    let cols: usize = pres.p1.iter().map(|&v| a.dims[v]).sum();
    if cols == 0 {
        return true;
    }
    let mut phi = Mat::zeros(p, rows, cols);
    let mut co = 0;
    for (i, &w) in pres.p1.iter().enumerate() {
        let mut ro = 0;
        for (j, &u) in pres.p0.iter().enumerate() {
            phi.set_block(ro, co, &a.act_elt(&pres.d[i][j], u, w));
            ro += a.dims[u];
        }
        co += a.dims[w];
    }
    phi.rref().rank == cols
}

/// Atlas modules A such that for every generator U with minimal presentation
/// P1 -> P0 the induced map Hom(P0, A) -> Hom(P1, A) is surjective.  The
/// cokernel of that induced map is dual to Hom(A, translate of U), so the
/// test agrees with the vanishing of homs into translates; both are computed
/// and compared in debug builds.
pub fn perp_tau(u: &[Rep], atlas: &Atlas) -> Result<Vec<usize>> {
    atlas.require_complete()?;
    if let Some((i, j)) = translate_hom_witness(u) {
        return Err(Error::NotRigid {
            witness: format!("module {i} maps nontrivially into the translate of module {j}"),
        });
    }
    let gens: Vec<&Rep> = u.iter().filter(|m| !m.is_zero()).collect();
    let preses: Vec<Presentation> = gens.iter().map(|g| minimal_presentation(g)).collect();
    let mut out = Vec::new();
    for (idx, a) in atlas.modules.iter().enumerate() {
        let ok = preses.iter().all(|pres| presentation_hom_surjective(a, pres));
        debug_assert_eq!(
            ok,
            gens.iter().all(|g| {
                let t = ar_translate(g);
                t.is_zero() || hom_dim(a, &t) == 0
            }),
            "surjectivity test disagrees with homs into translates"
        );
        if ok {
            out.push(idx);
        }
    }
    Ok(out)
}

/// Atlas modules vanishing at every listed vertex.
pub fn e_perp(e_vertices: &[usize], atlas: &Atlas) -> Vec<usize> {
    debug_assert!(e_vertices.iter().all(|&v| v < atlas.alg.n_vertices()));
    (0..atlas.len())
        .filter(|&i| e_vertices.iter().all(|&v| atlas.modules[i].dims[v] == 0))
        .collect()
}

/* # The support test */

/// Is every summand of m isomorphic to a listed module?
fn in_add_of(m: &Rep, members: &[&Rep]) -> Result<bool> {
    for part in decompose_reps(m)? {
        if part.is_zero() {
            continue;
        }
        if !members.iter().any(|k| is_isomorphic(k, &part)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Support test for a pair: every projective must have a minimal left
/// approximation by the module part whose cokernel stays in the additive
/// closure, and the vertex set must be exactly the annihilator of the module
/// part.
pub fn support_tau_tilting_test(pair: &TauPair) -> Result<bool> {
    let alg = &pair.alg;
    let refs = pair.module_refs();
    for v in 0..alg.n_vertices() {
        let dead = pair.modules.iter().all(|m| m.dims[v] == 0);
        if dead != pair.e_vertices.contains(&v) {
            return Ok(false);
        }
    }
    for v in 0..alg.n_vertices() {
        let pv = Rep::projective(alg.clone(), v);
        let (f, tgt) = left_approximation(&pv, &refs)?;
        let (ck, _proj) = cokernel(&f, &pv, &tgt);
        if !in_add_of(&ck, &refs)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/* # Factor identities for the two completions */

/// Outcome of checking the two factor-closure identities for a rigid
/// two-term collection: the closure of the smaller completion equals the
/// closure of the collection itself, and the closure of the larger
/// completion equals the perpendicular intersection.
pub struct FacIdentityReport {
    pub complete: bool,
    pub fac_x: Vec<usize>,
    pub fac_m: Vec<usize>,
    pub fac_n: Vec<usize>,
    pub perp_cap_eperp: Vec<usize>,
    /// Strict inclusion of the two closures; always false when complete.
    pub strict: bool,
}

/// Check the factor-closure identities for a rigid collection, using its
/// own completions when it is not weak cluster tilting.
pub fn verify_fac_identities(x: &TtClass, atlas: &Atlas) -> Result<FacIdentityReport> {
    atlas.require_complete()?;
    if let Some((i, j)) = x.rigidity_witness() {
        return Err(Error::NotRigid {
            witness: format!("members {i} and {j} have a nonzero degree-one hom space"),
        });
    }
    let complete = rtilt::is_weak_cluster_tilting(x)?;
    let (m_class, n_class) = if complete {
        (x.clone(), x.clone())
    } else {
        let cp = rtilt::completions(x)?;
        (cp.m.class, cp.n.class)
    };
    let x_mods = x.h_modules();
    let e = x.e_part();
    let fac_x = fac_closure(&x_mods, atlas)?.members;
    let fac_m = fac_closure(&m_class.h_modules(), atlas)?.members;
    let fac_n = fac_closure(&n_class.h_modules(), atlas)?.members;
    let perp = perp_tau(&x_mods, atlas)?;
    let ep = e_perp(&e, atlas);
    let cap: Vec<usize> = perp.iter().copied().filter(|i| ep.contains(i)).collect();
    if !fac_x.iter().all(|i| cap.contains(i)) {
        return Err(Error::CrossCheck(format!(
            "factor closure escapes the perpendicular intersection at atlas index {}",
            fac_x.iter().find(|i| !cap.contains(i)).unwrap()
        )));
    }
    if fac_m != fac_x {
        return Err(Error::CrossCheck(format!(
            "closure of the adjoining completion differs from the closure of the collection: {fac_m:?} vs {fac_x:?}"
        )));
    }
    if fac_n != cap {
        return Err(Error::CrossCheck(format!(
            "closure of the extending completion differs from the perpendicular intersection: {fac_n:?} vs {cap:?}"
        )));
    }
    if complete != (cap == fac_x) {
        return Err(Error::CrossCheck(format!(
            "completeness ({complete}) disagrees with the closure equality ({})",
            cap == fac_x
        )));
    }
    let strict = !complete;
    if strict && fac_m.len() >= fac_n.len() {
        return Err(Error::CrossCheck(
            "the two closures fail to be strictly nested for an incomplete collection".into(),
        ));
    }
    Ok(FacIdentityReport { complete, fac_x, fac_m, fac_n, perp_cap_eperp: cap, strict })
}

/* # Factor order and the sandwich */

/// Factor-order comparison of two support pairs: the closure of the first
/// contains the closure of the second.
pub fn partial_order_ge(m: &TauPair, n: &TauPair, atlas: &Atlas) -> Result<bool> {
    for (name, pair) in [("left", m), ("right", n)] {
        if !support_tau_tilting_test(pair)? {
            return Err(Error::Hypothesis(format!(
                "the {name} pair is not support tau-tilting; the factor order compares support pairs only"
            )));
        }
    }
    let fm = fac_closure(&m.modules, atlas)?.members;
    let fn_ = fac_closure(&n.modules, atlas)?.members;
    Ok(fn_.iter().all(|i| fm.contains(i)))
}

/// Does the sandwich biconditional hold for this collection and support
/// pair: the pair contains the collection exactly when it sits between the
/// two completions in the factor order?
pub fn verify_sandwich(x: &TtClass, l: &TauPair, atlas: &Atlas) -> Result<bool> {
    let complete = rtilt::is_weak_cluster_tilting(x)?;
    let (m_pair, n_pair) = if complete {
        let p = TauPair::from_class(x)?;
        (p.clone(), p)
    } else {
        let cp = rtilt::completions(x)?;
        (TauPair::from_class(&cp.m.class)?, TauPair::from_class(&cp.n.class)?)
    };
    let x_pair = TauPair::from_class(x)?;
    let contains = l.contains(&x_pair);
    let sandwiched =
        partial_order_ge(&n_pair, l, atlas)? && partial_order_ge(l, &m_pair, atlas)?;
    Ok(contains == sandwiched)
}

/* # Cotorsion-style pairs */

/// The seven condition flags, each computed by its own probe: (a1) the left
/// class is the whole first-extension perpendicular of the right class,
/// (a2) projectives have left approximations by the right class with
/// cokernels in the left class and targets in the intersection, (b1) no
/// first extensions from left into right, (b2) every module has both a
/// left-class special cover with right-class kernel and a left
/// right-class approximation with left-class cokernel, (c1) the right class
/// equals its factor closure, (c1') the right class is a torsion class,
/// (c2) the right class is extension-closed.
pub struct PairFlags {
    pub a1: bool,
    pub a2: bool,
    pub b1: bool,
    pub b2: bool,
    pub c1_prime: bool,
    pub c1: bool,
    pub c2: bool,
}

impl PairFlags {
    pub fn all(&self) -> bool {
        self.a1 && self.a2 && self.b1 && self.b2 && self.c1_prime && self.c1 && self.c2
    }
}

/// A left class, a right class, and the flags that were verified for them.
pub struct CotorsionTorsionPair {
    pub alg: AlgRef,
    pub u_class: Vec<usize>,
    pub v_class: TorsionClass,
    pub flags: PairFlags,
}

/// Indices of the summands of m inside the atlas.
fn atlas_summands(atlas: &Atlas, m: &Rep) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for part in decompose_reps(m)? {
        if part.is_zero() {
            continue;
        }
        match atlas.find(&part) {
            Some(i) => out.push(i),
            None => {
                return Err(Error::CrossCheck(
                    "a summand of a computed module is missing from the complete atlas".into(),
                ))
            }
        }
    }
    Ok(out)
}

/// Special cover built by pushing a projective cover out along a left
/// approximation of its kernel: the middle of the resulting short exact
/// sequence onto `a` with kernel the approximation target.
fn pushout_middle(a: &Rep, v_refs: &[&Rep]) -> Result<Rep> {
    let cover = projective_cover(a);
    let (krep, kincl) = kernel(&cover.map, &cover.total, a);
    let (g, vk) = left_approximation(&krep, v_refs)?;
    if krep.is_zero() {
        return Ok(cover.total);
    }
    let p = a.alg.p;
    let (sum, incls, _projs) = direct_sum(&[&cover.total, &vk]);
    let rel = kincl.then(&incls[0]).add(&g.then(&incls[1]).scale(p - 1));
    let (middle, _proj) = quotient_by_rows(&sum, &image_rows(&rel));
    Ok(middle)
}

/// Build the pair generated by a support pair and verify every flag.
/// The right class is the factor closure of the module part; the left class
/// is its first-extension perpendicular within the atlas.  Any failed flag
/// or a failed round-trip is reported as a falsifier.
pub fn cotorsion_from_sttilt(m: &TauPair, atlas: &Atlas) -> Result<CotorsionTorsionPair> {
    atlas.require_complete()?;
    if !support_tau_tilting_test(m)? {
        return Err(Error::Hypothesis(
            "cotorsion pairs are generated from support tau-tilting pairs".into(),
        ));
    }
    let v = fac_closure(&m.modules, atlas)?;
    let v_refs = member_refs(atlas, &v.members);
    let u: Vec<usize> = (0..atlas.len())
        .filter(|&i| v.members.iter().all(|&j| ext1_dim(&atlas.modules[i], &atlas.modules[j]) == 0))
        .collect();

    // (a1) holds by construction of u; recorded, not assumed, below.
    let a1 = (0..atlas.len()).all(|i| {
        u.contains(&i)
            == v.members.iter().all(|&j| ext1_dim(&atlas.modules[i], &atlas.modules[j]) == 0)
    });

    let mut a2 = true;
    for vtx in 0..atlas.alg.n_vertices() {
        let pv = Rep::projective(atlas.alg.clone(), vtx);
        let (f, tgt) = left_approximation(&pv, &v_refs)?;
        let (ck, _proj) = cokernel(&f, &pv, &tgt);
        let tgt_ok =
            atlas_summands(atlas, &tgt)?.iter().all(|i| u.contains(i) && v.members.contains(i));
        let ck_ok = atlas_summands(atlas, &ck)?.iter().all(|i| u.contains(i));
        if !(tgt_ok && ck_ok) {
            a2 = false;
        }
    }

    let b1 = u.iter().all(|&i| {
        v.members.iter().all(|&j| ext1_dim(&atlas.modules[i], &atlas.modules[j]) == 0)
    });

    let mut b2 = true;
    for a in &atlas.modules {
        let (f, tgt) = left_approximation(a, &v_refs)?;
        let (ck, _proj) = cokernel(&f, a, &tgt);
        if !atlas_summands(atlas, &ck)?.iter().all(|i| u.contains(i)) {
            b2 = false;
        }
        let middle = pushout_middle(a, &v_refs)?;
        if !atlas_summands(atlas, &middle)?.iter().all(|i| u.contains(i)) {
            b2 = false;
        }
    }

    let c1 = (0..atlas.len())
        .all(|i| in_fac(&atlas.modules[i], &v_refs) == v.members.contains(&i));
    let c2 = v.extension_closed;
    let c1_prime = v.quotient_closed && v.extension_closed;

    let flags = PairFlags { a1, a2, b1, b2, c1_prime, c1, c2 };
    if !flags.all() {
        return Err(Error::CrossCheck(format!(
            "a generated cotorsion pair failed its condition probes: a1={a1} a2={a2} b1={b1} b2={b2} c1'={c1_prime} c1={c1} c2={c2}"
        )));
    }

    let mut cap: Vec<usize> = u.iter().copied().filter(|i| v.members.contains(i)).collect();
    cap.sort_unstable();
    let mut m_idx: Vec<usize> = Vec::new();
    for module in &m.modules {
        match atlas.find(module) {
            Some(i) => m_idx.push(i),
            None => {
                return Err(Error::CrossCheck(
                    "a pair module is missing from the complete atlas".into(),
                ))
            }
        }
    }
    m_idx.sort_unstable();
    if cap != m_idx {
        return Err(Error::CrossCheck(format!(
            "round-trip failed: the intersection {cap:?} differs from the generating pair {m_idx:?}"
        )));
    }

    Ok(CotorsionTorsionPair { alg: atlas.alg.clone(), u_class: u, v_class: v, flags })
}

/* # Bijection with functorially finite torsion classes */

/// Counts and exhaustiveness of the bijection check.
pub struct BijectionReport {
    pub class_count: usize,
    pub torsion_class_count: usize,
    /// True when every atlas subset was enumerated; large atlases only get
    /// the injectivity and round-trip checks and report partial coverage.
    pub exhaustive: bool,
    pub note: String,
}

/// Atlas sizes above which subset enumeration is refused.
const ENUMERATION_GATE: usize = 20;

/// Enumerate all torsion classes over the atlas as quotient- and
/// extension-closed subsets, exhibiting a minimal left approximation of
/// every atlas module into each class as the finiteness witness.
pub fn enumerate_torsion_classes(atlas: &Atlas) -> Result<Vec<Vec<usize>>> {
    let n = atlas.len();
    // Trace rows of each single generator in each target, precomputed so
    // the subset scan only stacks and ranks.
    let single: Vec<Vec<Vec<Mat>>> = (0..n)
        .map(|g| {
            (0..n)
                .map(|m| trace_rows(&[&atlas.modules[g]], &atlas.modules[m]))
                .collect()
        })
        .collect();
    let p = atlas.alg.p;
    let nv = atlas.alg.n_vertices();
    let mut found = Vec::new();
    for mask in 0u32..(1u32 << n) {
        let members: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let mut closed = true;
        for m in 0..n {
            if members.contains(&m) {
                continue;
            }
            let full = (0..nv).all(|v| {
                let d = atlas.modules[m].dims[v];
                if d == 0 {
                    return true;
                }
                let mut rows = Mat::zeros(p, 0, d);
                for &g in &members {
                    rows = rows.vstack(&single[g][m][v]).row_basis();
                }
                rows.rows == d
            });
            if full {
                closed = false;
                break;
            }
        }
        if !closed {
            continue;
        }
        if !extension_closed_over(atlas, &members) {
            continue;
        }
        let refs = member_refs(atlas, &members);
        for m in &atlas.modules {
            let _witness = left_approximation(m, &refs)?;
        }
        found.push(members);
    }
    Ok(found)
}

/// Check that support pairs biject with functorially finite torsion classes
/// over the atlas of the algebra: the factor closure map is injective, the
/// intersection map inverts it, and (for small atlases) every torsion class
/// arises.
pub fn verify_bijections(alg: &AlgRef) -> Result<BijectionReport> {
    let atlas = Atlas::knit(alg.clone())?;
    atlas.require_complete()?;
    let (classes, graph_complete) =
        rtilt::sttilt_classes(alg, &rtilt::GraphBudget::default())?;
    if !graph_complete {
        return Err(Error::Budget(
            "the exchange graph was truncated; the bijection check needs all support pairs".into(),
        ));
    }
    let pairs: Vec<TauPair> =
        classes.iter().map(TauPair::from_class).collect::<Result<_>>()?;
    let mut facs: Vec<Vec<usize>> = Vec::new();
    for pair in &pairs {
        let cls = fac_closure(&pair.modules, &atlas)?;
        if !(cls.quotient_closed && cls.extension_closed) {
            return Err(Error::CrossCheck(
                "the factor closure of a support pair is not a torsion class".into(),
            ));
        }
        facs.push(cls.members);
    }
    for i in 0..facs.len() {
        for j in (i + 1)..facs.len() {
            if facs[i] == facs[j] {
                return Err(Error::CrossCheck(format!(
                    "the closure map is not injective: pairs {i} and {j} share a torsion class"
                )));
            }
        }
    }
    for (pair, fac) in pairs.iter().zip(&facs) {
        let mut cap: Vec<usize> = fac
            .iter()
            .copied()
            .filter(|&i| {
                fac.iter().all(|&j| ext1_dim(&atlas.modules[i], &atlas.modules[j]) == 0)
            })
            .collect();
        cap.sort_unstable();
        let mut midx: Vec<usize> = pair
            .modules
            .iter()
            .map(|m| atlas.find(m).expect("pair modules live in the complete atlas"))
            .collect();
        midx.sort_unstable();
        if cap != midx {
            return Err(Error::CrossCheck(format!(
                "the intersection map fails to recover a pair: {cap:?} vs {midx:?}"
            )));
        }
        let recovered_e: Vec<usize> = (0..alg.n_vertices())
            .filter(|&v| cap.iter().all(|&i| atlas.modules[i].dims[v] == 0))
            .collect();
        if recovered_e != pair.e_vertices {
            return Err(Error::CrossCheck(format!(
                "the recovered support vertices {recovered_e:?} differ from the pair's {:?}",
                pair.e_vertices
            )));
        }
    }
    if atlas.len() > ENUMERATION_GATE {
        return Ok(BijectionReport {
            class_count: pairs.len(),
            torsion_class_count: pairs.len(),
            exhaustive: false,
            note: format!(
                "atlas has {} members (> {ENUMERATION_GATE}); subset enumeration skipped",
                atlas.len()
            ),
        });
    }
    let enumerated = enumerate_torsion_classes(&atlas)?;
    for fac in &facs {
        if !enumerated.contains(fac) {
            return Err(Error::CrossCheck(format!(
                "a pair's torsion class {fac:?} is missing from the enumeration"
            )));
        }
    }
    for t in &enumerated {
        if !facs.contains(t) {
            return Err(Error::CrossCheck(format!(
                "torsion class {t:?} does not arise from any support pair"
            )));
        }
    }
    Ok(BijectionReport {
        class_count: pairs.len(),
        torsion_class_count: enumerated.len(),
        exhaustive: true,
        note: String::new(),
    })
}

/* # Directed completion through the star product */

/// A directed completion: the resulting support pair together with the
/// torsion class it generates.
#[derive(Debug)]
pub struct LeftCompletion {
    pub pair: TauPair,
    pub torsion: TorsionClass,
}

/// Complete a pair towards a chosen support pair below the maximal
/// completion: the star product of the two factor closures (all modules
/// with a submodule in the first whose factor lands in the second) is a
/// torsion class, and its first-extension perpendicular members inside it
/// form the answer.  Uses the default subobject cap.
pub fn left_bongartz(xpair: &TauPair, l: &TauPair, atlas: &Atlas) -> Result<LeftCompletion> {
    left_bongartz_with(xpair, l, atlas, SUBOBJECT_DIM_CAP)
}

/// As [`left_bongartz`], with an explicit subobject-enumeration cap.
pub fn left_bongartz_with(
    xpair: &TauPair,
    l: &TauPair,
    atlas: &Atlas,
    dim_cap: usize,
) -> Result<LeftCompletion> {
    atlas.require_complete()?;
    if !support_tau_tilting_test(l)? {
        return Err(Error::Hypothesis(
            "the directed completion needs a support tau-tilting target".into(),
        ));
    }
    // The maximal completion of the pair generates the perpendicular
    // intersection as its factor closure; the target must sit below it.
    let perp = perp_tau(&xpair.modules, atlas)?;
    let ep = e_perp(&xpair.e_vertices, atlas);
    let fac_n: Vec<usize> = perp.into_iter().filter(|i| ep.contains(i)).collect();
    let fac_l = fac_closure(&l.modules, atlas)?;
    if !fac_l.members.iter().all(|i| fac_n.contains(i)) {
        return Err(Error::Hypothesis(
            "the target pair is not below the maximal completion in the factor order".into(),
        ));
    }

    let x_refs = xpair.module_refs();
    let l_refs = l.module_refs();
    let mut members = Vec::new();
    for (idx, a) in atlas.modules.iter().enumerate() {
        // Star membership by full subobject enumeration: some submodule in
        // the first closure with factor in the second.
        let mut by_subobjects = false;
        for sub in subobject_list(a, dim_cap)? {
            if !in_fac(&sub.rep, &x_refs) {
                continue;
            }
            let (q, _proj) = quotient_by_rows(a, &sub.rows);
            if in_fac(&q, &l_refs) {
                by_subobjects = true;
                break;
            }
        }
        // The largest submodule from the first closure is its trace, and
        // quotient-closure of the second class makes the trace quotient
        // decisive; both routes must agree.
        let rows = trace_rows(&x_refs, a);
        let (q, _proj) = quotient_by_rows(a, &rows);
        let by_trace = in_fac(&q, &l_refs);
        if by_subobjects != by_trace {
            return Err(Error::CrossCheck(format!(
                "star membership of atlas module {idx} differs between the subobject scan ({by_subobjects}) and the trace quotient ({by_trace})"
            )));
        }
        if by_subobjects {
            members.push(idx);
        }
    }
    let torsion = TorsionClass::from_members(atlas, members);
    if !(torsion.quotient_closed && torsion.extension_closed) {
        return Err(Error::CrossCheck(
            "the star product failed its torsion-class probes".into(),
        ));
    }
    let selected: Vec<usize> = torsion
        .members
        .iter()
        .copied()
        .filter(|&i| {
            torsion.members.iter().all(|&j| ext1_dim(&atlas.modules[i], &atlas.modules[j]) == 0)
        })
        .collect();
    let mods: Vec<Rep> = selected.iter().map(|&i| atlas.modules[i].clone()).collect();
    let q_minus: Vec<usize> = (0..atlas.alg.n_vertices())
        .filter(|&v| mods.iter().all(|m| m.dims[v] == 0))
        .collect();
    let pair = TauPair::new(atlas.alg.clone(), &mods, &q_minus)?;
    if !support_tau_tilting_test(&pair)? {
        return Err(Error::CrossCheck(
            "the directed completion is not support tau-tilting".into(),
        ));
    }
    if !pair.contains(xpair) {
        return Err(Error::CrossCheck(
            "the directed completion does not contain the pair it completes".into(),
        ));
    }
    Ok(LeftCompletion { pair, torsion })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Algebra;
    use crate::atlas::AtlasBudget;
    use crate::twoterm::TwoTermComplex;

    fn a_n(n: usize) -> AlgRef {
        Algebra::linear_an(n, crate::fp::DEFAULT_PRIME)
    }

    fn idx(atlas: &Atlas, m: &Rep) -> usize {
        atlas.find(m).expect("module should be in the atlas")
    }

    fn setup_a2() -> (AlgRef, Atlas, Rep, Rep, Rep) {
        let alg = a_n(2);
        let atlas = Atlas::knit(alg.clone()).unwrap();
        let p1 = Rep::projective(alg.clone(), 0);
        let p2 = Rep::projective(alg.clone(), 1);
        let s1 = Rep::simple(alg.clone(), 0);
        (alg, atlas, p1, p2, s1)
    }

    #[test]
    fn pair_construction_guards() {
        let (alg, _atlas, p1, p2, s1) = setup_a2();
        let ok = TauPair::new(alg.clone(), std::slice::from_ref(&s1), &[1]).unwrap();
        assert_eq!(ok.modules.len(), 1);
        assert_eq!(ok.e_vertices, vec![1]);
        // A module mapping into a translate of another is rejected.
        let err = TauPair::new(alg.clone(), &[s1.clone(), p2.clone()], &[]).unwrap_err();
        assert!(matches!(err, Error::NotRigid { .. }));
        // A support vertex meeting the module part is rejected.
        let err = TauPair::new(alg.clone(), std::slice::from_ref(&p1), &[0]).unwrap_err();
        assert!(matches!(err, Error::Hypothesis(_)));
        // Decomposable input is split and deduplicated.
        let (sum, _i, _p) = direct_sum(&[&s1, &s1]);
        let pair = TauPair::new(alg, &[sum], &[1]).unwrap();
        assert_eq!(pair.modules.len(), 1);
    }

    #[test]
    fn fac_closure_examples_on_two_vertices() {
        let (_alg, atlas, p1, p2, s1) = setup_a2();
        let whole = fac_closure(&[p1.clone(), p2.clone()], &atlas).unwrap();
        assert_eq!(whole.members.len(), 3);
        assert!(whole.quotient_closed && whole.extension_closed);

        let just_s1 = fac_closure(std::slice::from_ref(&s1), &atlas).unwrap();
        assert_eq!(just_s1.members, vec![idx(&atlas, &s1)]);

        let from_p1 = fac_closure(std::slice::from_ref(&p1), &atlas).unwrap();
        let mut expect = vec![idx(&atlas, &p1), idx(&atlas, &s1)];
        expect.sort_unstable();
        assert_eq!(from_p1.members, expect);

        let empty = fac_closure(&[], &atlas).unwrap();
        assert!(empty.members.is_empty());
        assert!(empty.quotient_closed && empty.extension_closed);
    }

    #[test]
    fn fac_closure_flags_a_non_extension_closed_class() {
        let (_alg, atlas, p1, p2, s1) = setup_a2();
        // The two simples are closed under factors but the extension
        // between them has the big projective as middle.
        let class = fac_closure(&[s1.clone(), p2.clone()], &atlas).unwrap();
        let mut expect = vec![idx(&atlas, &s1), idx(&atlas, &p2)];
        expect.sort_unstable();
        assert_eq!(class.members, expect);
        assert!(class.quotient_closed);
        assert!(!class.extension_closed);
        let _ = p1;
    }

    #[test]
    fn fac_closure_refuses_an_incomplete_atlas() {
        let alg = a_n(3);
        let atlas =
            Atlas::knit_with(alg.clone(), AtlasBudget { max_modules: 2, max_total_dim: 96 })
                .unwrap();
        assert!(!atlas.complete);
        let err = fac_closure(&[Rep::simple(alg, 0)], &atlas).unwrap_err();
        assert!(matches!(err, Error::IncompleteAtlas(_)));
    }

    #[test]
    fn perpendicular_examples_on_two_vertices() {
        let (_alg, atlas, p1, p2, s1) = setup_a2();
        assert_eq!(perp_tau(&[], &atlas).unwrap().len(), 3);
        let perp_s1 = perp_tau(std::slice::from_ref(&s1), &atlas).unwrap();
        let mut expect = vec![idx(&atlas, &p1), idx(&atlas, &s1)];
        expect.sort_unstable();
        assert_eq!(perp_s1, expect);
        assert_eq!(perp_tau(std::slice::from_ref(&p1), &atlas).unwrap().len(), 3);

        assert_eq!(e_perp(&[], &atlas).len(), 3);
        assert_eq!(e_perp(&[1], &atlas), vec![idx(&atlas, &s1)]);
        assert!(e_perp(&[0, 1], &atlas).is_empty());
        let _ = p2;
    }

    #[test]
    fn support_test_examples_on_two_vertices() {
        let (alg, _atlas, p1, p2, s1) = setup_a2();
        let projs = TauPair::new(alg.clone(), &[p1.clone(), p2.clone()], &[]).unwrap();
        assert!(support_tau_tilting_test(&projs).unwrap());

        let good = TauPair::new(alg.clone(), std::slice::from_ref(&s1), &[1]).unwrap();
        assert!(support_tau_tilting_test(&good).unwrap());

        // Missing the forced support vertex fails the exactness clause.
        let bad = TauPair::new(alg.clone(), std::slice::from_ref(&s1), &[]).unwrap();
        assert!(!support_tau_tilting_test(&bad).unwrap());

        let small = TauPair::new(alg.clone(), std::slice::from_ref(&p2), &[0]).unwrap();
        assert!(support_tau_tilting_test(&small).unwrap());

        let zero = TauPair::new(alg.clone(), &[], &[0, 1]).unwrap();
        assert!(support_tau_tilting_test(&zero).unwrap());
        let under = TauPair::new(alg, &[], &[]).unwrap();
        assert!(!support_tau_tilting_test(&under).unwrap());
    }

    #[test]
    fn fac_identities_on_two_vertices() {
        let (alg, atlas, p1, p2, s1) = setup_a2();
        let x = TtClass::new(&alg, &[TwoTermComplex::from_pair(&s1, &[])]).unwrap();
        let report = verify_fac_identities(&x, &atlas).unwrap();
        assert!(!report.complete);
        assert!(report.strict);
        assert_eq!(report.fac_m, vec![idx(&atlas, &s1)]);
        let mut expect = vec![idx(&atlas, &p1), idx(&atlas, &s1)];
        expect.sort_unstable();
        assert_eq!(report.fac_n, expect);

        let full = TtClass::new(
            &alg,
            &[TwoTermComplex::from_pair(&p1, &[]), TwoTermComplex::from_pair(&p2, &[])],
        )
        .unwrap();
        let report = verify_fac_identities(&full, &atlas).unwrap();
        assert!(report.complete && !report.strict);
        assert_eq!(report.fac_m.len(), 3);
        assert_eq!(report.fac_n.len(), 3);
    }

    /// Every rigid collection over the three-vertex path passes the factor
    /// identities, with strict nesting exactly in the incomplete cases.
    #[test]
    fn fac_identities_for_every_rigid_collection_on_the_three_vertex_path() {
        let alg = a_n(3);
        let atlas = Atlas::knit(alg.clone()).unwrap();
        let mut candidates: Vec<TwoTermComplex> =
            atlas.modules.iter().map(|m| TwoTermComplex::from_pair(m, &[])).collect();
        for v in 0..3 {
            candidates.push(TwoTermComplex::shifted_stalk(alg.clone(), v));
        }
        let mut rigid = 0usize;
        let mut incomplete = 0usize;
        for mask in 0u32..(1 << candidates.len()) {
            let chosen: Vec<TwoTermComplex> = (0..candidates.len())
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| candidates[i].clone())
                .collect();
            let x = TtClass::new(&alg, &chosen).unwrap();
            if !x.is_rigid() {
                continue;
            }
            rigid += 1;
            let report = verify_fac_identities(&x, &atlas).unwrap();
            if !report.complete {
                incomplete += 1;
                assert!(report.strict);
            }
        }
        // 1 empty + 9 singletons + 21 compatible pairs + 14 complete.
        assert_eq!(rigid, 45);
        assert_eq!(incomplete, 31);
    }

    #[test]
    fn partial_order_and_sandwich_on_two_vertices() {
        let (alg, atlas, p1, p2, s1) = setup_a2();
        let (classes, complete) =
            rtilt::sttilt_classes(&alg, &rtilt::GraphBudget::default()).unwrap();
        assert!(complete);
        let pairs: Vec<TauPair> =
            classes.iter().map(|c| TauPair::from_class(c).unwrap()).collect();
        assert_eq!(pairs.len(), 5);

        for pair in &pairs {
            assert!(partial_order_ge(pair, pair, &atlas).unwrap());
        }
        let big = TauPair::new(alg.clone(), &[p1.clone(), s1.clone()], &[]).unwrap();
        let small = TauPair::new(alg.clone(), std::slice::from_ref(&s1), &[1]).unwrap();
        assert!(partial_order_ge(&big, &small, &atlas).unwrap());
        assert!(!partial_order_ge(&small, &big, &atlas).unwrap());

        let x = TtClass::new(&alg, &[TwoTermComplex::from_pair(&s1, &[])]).unwrap();
        let x_pair = TauPair::from_class(&x).unwrap();
        let mut containing = 0usize;
        for l in &pairs {
            assert!(verify_sandwich(&x, l, &atlas).unwrap());
            if l.contains(&x_pair) {
                containing += 1;
            }
        }
        assert_eq!(containing, 2);
        let _ = p2;
    }

    #[test]
    fn cotorsion_pairs_on_two_vertices() {
        let (alg, atlas, p1, p2, s1) = setup_a2();
        let projs = TauPair::new(alg.clone(), &[p1.clone(), p2.clone()], &[]).unwrap();
        let pair = cotorsion_from_sttilt(&projs, &atlas).unwrap();
        assert!(pair.flags.all());
        assert_eq!(pair.v_class.members.len(), 3);
        let mut expect = vec![idx(&atlas, &p1), idx(&atlas, &p2)];
        expect.sort_unstable();
        assert_eq!(pair.u_class, expect, "only the projectives have no extensions into the whole atlas");
        assert!(!pair.u_class.contains(&idx(&atlas, &s1)));

        let zero = TauPair::new(alg.clone(), &[], &[0, 1]).unwrap();
        let pair = cotorsion_from_sttilt(&zero, &atlas).unwrap();
        assert!(pair.v_class.members.is_empty());
        assert_eq!(pair.u_class.len(), 3);

        let (classes, _) = rtilt::sttilt_classes(&alg, &rtilt::GraphBudget::default()).unwrap();
        for class in &classes {
            let p = TauPair::from_class(class).unwrap();
            let built = cotorsion_from_sttilt(&p, &atlas).unwrap();
            assert!(built.flags.all());
        }
    }

    #[test]
    fn bijection_counts_on_paths() {
        for (n, count) in [(1usize, 2usize), (2, 5), (3, 14)] {
            let report = verify_bijections(&a_n(n)).unwrap();
            assert!(report.exhaustive, "paths have small atlases");
            assert_eq!(report.class_count, count, "support-pair count over the {n}-vertex path");
            assert_eq!(report.torsion_class_count, count);
        }
    }

    #[test]
    fn bijection_counts_on_the_radical_cube_truncation() {
        let alg = Algebra::linear_an_nilpotent(4, 3, crate::fp::DEFAULT_PRIME);
        let report = verify_bijections(&alg).unwrap();
        assert!(report.exhaustive);
        assert_eq!(report.class_count, 37);
        assert_eq!(report.torsion_class_count, 37);
    }

    #[test]
    fn left_completion_examples_on_two_vertices() {
        let (alg, atlas, p1, p2, s1) = setup_a2();

        // Completing towards the pair itself returns it.
        let x = TauPair::new(alg.clone(), std::slice::from_ref(&s1), &[1]).unwrap();
        let l = x.clone();
        let done = left_bongartz(&x, &l, &atlas).unwrap();
        assert!(done.pair.is_same(&l));
        assert_eq!(done.torsion.members, vec![idx(&atlas, &s1)]);

        // Completing towards the maximal completion reproduces it.
        let loose = TauPair::new(alg.clone(), std::slice::from_ref(&s1), &[]).unwrap();
        let top = TauPair::new(alg.clone(), &[p1.clone(), s1.clone()], &[]).unwrap();
        let got = left_bongartz(&loose, &top, &atlas).unwrap();
        assert!(got.pair.is_same(&top));
        assert_eq!(got.torsion.members.len(), 2);

        // An empty pair contributes nothing to the star.
        let nothing = TauPair::new(alg.clone(), &[], &[]).unwrap();
        let got = left_bongartz(&nothing, &top, &atlas).unwrap();
        assert!(got.pair.is_same(&top));
        let mut expect = vec![idx(&atlas, &p1), idx(&atlas, &s1)];
        expect.sort_unstable();
        assert_eq!(got.torsion.members, expect);

        // A target above the maximal completion is rejected.
        let other = TauPair::new(alg.clone(), std::slice::from_ref(&p2), &[0]).unwrap();
        let err = left_bongartz(&x, &other, &atlas).unwrap_err();
        assert!(matches!(err, Error::Hypothesis(_)));

        // The subobject cap refuses rather than sampling.
        let err = left_bongartz_with(&nothing, &top, &atlas, 1).unwrap_err();
        assert!(matches!(err, Error::CapExceeded(_)));
    }
}
