//! Rigid collections of two-term complexes: completion on both sides,
//! completeness tests, exchange triangles, mutation, and the exchange graph.
//!
//! A collection is stored as a normalized list of minimal, indecomposable,
//! pairwise non-isomorphic two-term complexes.  Under the standard
//! dictionary a complete collection corresponds to a support pair: the
//! cohomology modules of its non-stalk members together with the vertices of
//! its shifted-stalk members.

use std::collections::VecDeque;

use crate::algebra::AlgRef;
use crate::atlas::Atlas;
use crate::error::{Error, Result};
use crate::rep::{
    self, cokernel, decompose_reps, hom_dim, is_isomorphic, left_approximation, Rep,
};
use crate::twoterm::{
    cocone, cone, decompose_tt, emat_compose, hom_k, hom_k_shift1, hom_k_shift1_dim, is_iso_tt,
    left_approx_tt, minimal_form, right_approx_tt, EltMat, TwoTermComplex,
};

/// A finite collection of two-term complexes, normalized so the members are
/// minimal, indecomposable and pairwise non-isomorphic, kept in a
/// deterministic order (sorted by fingerprint, insertion order on ties).
#[derive(Clone, Debug)]
pub struct TtClass {
    pub alg: AlgRef,
    pub members: Vec<TwoTermComplex>,
}

impl TtClass {
    /// Normalize an arbitrary list of complexes into a collection: minimalize
    /// each, split into indecomposable summands, and drop duplicates up to
    /// isomorphism.
    pub fn new(alg: &AlgRef, objects: &[TwoTermComplex]) -> Result<TtClass> {
        let mut class = TtClass {
            alg: alg.clone(),
            members: Vec::new(),
        };
        for c in objects {
            class.absorb(c)?;
        }
        class.sort();
        Ok(class)
    }

    fn absorb(&mut self, c: &TwoTermComplex) -> Result<()> {
        let mf = minimal_form(c);
        if mf.complex.is_zero() {
            return Ok(());
        }
        for part in decompose_tt(&mf.complex)? {
            if self.contains_iso(&part).is_none() {
                self.members.push(part);
            }
        }
        Ok(())
    }

    fn sort(&mut self) {
        self.members
            .sort_by_key(|a| a.fingerprint());
    }

    /// The empty collection.
    pub fn empty(alg: &AlgRef) -> TtClass {
        TtClass {
            alg: alg.clone(),
            members: Vec::new(),
        }
    }

    /// The collection of all projective stalks (0 -> P_v), one per vertex.
    pub fn projectives(alg: &AlgRef) -> TtClass {
        let mut class = TtClass {
            alg: alg.clone(),
            members: (0..alg.n_vertices())
                .map(|v| TwoTermComplex::projective_stalk(alg.clone(), v))
                .collect(),
        };
        class.sort();
        class
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn member(&self, i: usize) -> &TwoTermComplex {
        &self.members[i]
    }

    pub fn member_refs(&self) -> Vec<&TwoTermComplex> {
        self.members.iter().collect()
    }

    /// Index of the member isomorphic to `c`, if any.
    pub fn contains_iso(&self, c: &TwoTermComplex) -> Option<usize> {
        self.members.iter().position(|m| is_iso_tt(m, c))
    }

    /// The collection extended by one more complex (normalized).
    pub fn with_member(&self, c: &TwoTermComplex) -> Result<TtClass> {
        let mut objs = self.members.clone();
        objs.push(c.clone());
        TtClass::new(&self.alg, &objs)
    }

    /// The collection with member `idx` removed.
    pub fn without_member(&self, idx: usize) -> TtClass {
        let mut members = self.members.clone();
        members.remove(idx);
        TtClass {
            alg: self.alg.clone(),
            members,
        }
    }

    /// Equality as sets of isomorphism classes.
    pub fn is_same(&self, other: &TtClass) -> bool {
        self.members.len() == other.members.len()
            && self
                .members
                .iter()
                .all(|m| other.contains_iso(m).is_some())
    }

    /// Vertices v whose shifted stalk (P_v -> 0) is a member, ascending.
    pub fn e_part(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .members
            .iter()
            .filter(|m| m.p0.is_empty())
            .map(|m| {
                debug_assert_eq!(m.p1.len(), 1);
                m.p1[0]
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// Cohomology modules of the non-stalk members (all nonzero).
    pub fn h_modules(&self) -> Vec<Rep> {
        self.members
            .iter()
            .filter(|m| !m.p0.is_empty())
            .map(|m| {
                let h = m.h0();
                debug_assert!(!h.is_zero());
                h
            })
            .collect()
    }

    /// First ordered pair of members with a nonzero degree-one hom space.
    pub fn rigidity_witness(&self) -> Option<(usize, usize)> {
        for i in 0..self.members.len() {
            for j in 0..self.members.len() {
                if hom_k_shift1_dim(&self.members[i], &self.members[j]) != 0 {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn is_rigid(&self) -> bool {
        self.rigidity_witness().is_none()
    }

    fn require_rigid(&self) -> Result<()> {
        match self.rigidity_witness() {
            None => Ok(()),
            Some((i, j)) => Err(Error::NotRigid {
                witness: format!("members {i} and {j} have a nonzero degree-one hom space"),
            }),
        }
    }
}

/// Vertices v whose projective P_v admits no nonzero map to any cohomology
/// module of the collection.  For a rigid collection every shifted-stalk
/// vertex lies in this set; that containment is enforced.
pub fn r_annihilator(x: &TtClass) -> Result<Vec<usize>> {
    x.require_rigid()?;
    let alg = &x.alg;
    let hs = x.h_modules();
    let mut out = Vec::new();
    for v in 0..alg.n_vertices() {
        let pv = Rep::projective(alg.clone(), v);
        let mut killed = true;
        for h in &hs {
            let d = hom_dim(&pv, h);
            // Hom(P_v, M) is the fiber of M at v; keep both computations
            // honest against each other.
            debug_assert_eq!(d, h.dims[v]);
            if d != 0 {
                killed = false;
                break;
            }
        }
        if killed {
            out.push(v);
        }
    }
    for v in x.e_part() {
        if !out.contains(&v) {
            return Err(Error::CrossCheck(format!(
                "shifted stalk at vertex {v} maps nontrivially into the module part of a rigid collection"
            )));
        }
    }
    Ok(out)
}

/// One exchange triangle `left -> middle -> right -> left[1]`.  The middle is
/// a finite sum of approximating members; `connecting` represents the class
/// of the third map as an element matrix right.p1 -> left.p0.
pub struct ExchangeTriangle {
    pub left: TwoTermComplex,
    pub middle: TwoTermComplex,
    pub right: TwoTermComplex,
    pub connecting: EltMat,
    /// Whether the connecting class lies in the span of classes that factor
    /// through sums of shifted projective stalks.
    pub connecting_factors: bool,
}

/// Whether the class of `g: src -> tgt[1]` (an element matrix src.p1 ->
/// tgt.p0) lies in the span of classes factoring through sums of shifted
/// projective stalks (P -> 0).
///
/// Derivation for this model: the degree-(-1) identity realizes a chain map
/// from `src` onto the stalk sum (src_1 -> 0), and composing it with the
/// element matrix `g` read as a class out of that stalk sum reproduces `g`.
/// Hence the span is the whole space and the membership always holds; it is
/// still computed honestly, so a violation would surface as a failed
/// certificate rather than being assumed.  Equivalently, for maps between
/// two-term complexes, factoring through shifted stalks is exactly the
/// vanishing of the induced map on cohomology in degree zero; for a shifted
/// target that induced map lives in a degree where the target has no
/// cohomology, which is why the condition is automatic here.
fn factors_through_shifted_stalks(
    src: &TwoTermComplex,
    tgt: &TwoTermComplex,
    g: &EltMat,
) -> bool {
    let alg = src.alg.clone();
    let hs = hom_k_shift1(src, tgt);
    let mut span: Vec<EltMat> = Vec::new();
    for v in 0..alg.n_vertices() {
        let sv = TwoTermComplex::shifted_stalk(alg.clone(), v);
        let into = hom_k(src, &sv);
        if into.dim == 0 {
            continue;
        }
        let out = hom_k_shift1(&sv, tgt);
        for f in &into.reps {
            for h in &out.reps {
                span.push(emat_compose(&alg, &f.f1, h, tgt.p0.len()));
            }
        }
    }
    hs.in_class_span(&span, g)
}

/// Minimal approximations leave no common indecomposable summand between the
/// approximating middle term and the triangle's third term; a violation is an
/// internal-consistency failure.
fn check_disjoint_summands(
    a: &TwoTermComplex,
    b: &TwoTermComplex,
    what_a: &str,
    what_b: &str,
) -> Result<()> {
    let pa = decompose_tt(&minimal_form(a).complex)?;
    let pb = decompose_tt(&minimal_form(b).complex)?;
    for x in &pa {
        for y in &pb {
            if is_iso_tt(x, y) {
                return Err(Error::CrossCheck(format!(
                    "{what_a} and {what_b} share an indecomposable summand"
                )));
            }
        }
    }
    Ok(())
}

/// Triangle `left -> middle -> right -> left[1]` built from the minimal left
/// approximation of `left` by `class`; `right` is the minimalized cone.
fn cone_triangle(left: &TwoTermComplex, class: &[&TwoTermComplex]) -> Result<ExchangeTriangle> {
    let alg = left.alg.clone();
    let ap = left_approx_tt(left, class);
    let cn = cone(&ap.map, left, &ap.target)?;
    let mf = minimal_form(&cn.complex);
    // Transport the connecting class to the minimal cone by precomposing
    // with the inclusion of the minimal form.
    let connecting = emat_compose(&alg, &mf.incl.f1, &cn.conn, left.p0.len());
    let right = mf.complex;
    check_disjoint_summands(
        &ap.target,
        &right,
        "minimal left approximation target",
        "exchange cone",
    )?;
    let connecting_factors = factors_through_shifted_stalks(&right, left, &connecting);
    Ok(ExchangeTriangle {
        left: left.clone(),
        middle: ap.target,
        right,
        connecting,
        connecting_factors,
    })
}

/// Triangle `left -> middle -> right -> left[1]` built from the minimal right
/// approximation of `right` by `class`; `left` is the minimalized cocone.
fn cocone_triangle(class: &[&TwoTermComplex], right: &TwoTermComplex) -> Result<ExchangeTriangle> {
    let alg = right.alg.clone();
    let ap = right_approx_tt(class, right);
    let cc = cocone(&ap.map, &ap.source, right)?;
    let mf = minimal_form(&cc.complex);
    // Transport the connecting class onto the minimal cocone by composing
    // with the projection of the minimal form.
    let connecting = emat_compose(&alg, &cc.conn, &mf.proj.f0, mf.complex.p0.len());
    let left = mf.complex;
    check_disjoint_summands(
        &ap.source,
        &left,
        "minimal right approximation source",
        "exchange cocone",
    )?;
    let connecting_factors = factors_through_shifted_stalks(right, &left, &connecting);
    Ok(ExchangeTriangle {
        left,
        middle: ap.source,
        right: right.clone(),
        connecting,
        connecting_factors,
    })
}

/// A one-sided completion together with the per-vertex exchange triangles
/// that produced it.
pub struct Completion {
    pub class: TtClass,
    pub triangles: Vec<ExchangeTriangle>,
}

/// Completion preserving the annihilator: for each vertex v, form the
/// triangle (0 -> P_v) -> X' -> V -> (0 -> P_v)[1] over the minimal left
/// approximation by the collection and adjoin the summands of V.
pub fn co_bongartz(x: &TtClass) -> Result<Completion> {
    x.require_rigid()?;
    let alg = x.alg.clone();
    let before = r_annihilator(x)?;
    let mut class = x.clone();
    let mut triangles = Vec::new();
    let refs = x.member_refs();
    for v in 0..alg.n_vertices() {
        let pstalk = TwoTermComplex::projective_stalk(alg.clone(), v);
        let tri = cone_triangle(&pstalk, &refs)?;
        for part in decompose_tt(&tri.right)? {
            if class.contains_iso(&part).is_none() {
                class.members.push(part);
            }
        }
        triangles.push(tri);
    }
    class.sort();
    let after = r_annihilator(&class)?;
    if before != after {
        return Err(Error::CrossCheck(
            "completion on the cone side changed the annihilator".into(),
        ));
    }
    Ok(Completion { class, triangles })
}

/// Completion preserving the shifted-stalk part: for each vertex v, form the
/// triangle V -> X' -> (P_v -> 0) -> V[1] over the minimal right
/// approximation by the collection and adjoin the summands of V.
pub fn bongartz(x: &TtClass) -> Result<Completion> {
    x.require_rigid()?;
    let alg = x.alg.clone();
    let before = x.e_part();
    let mut class = x.clone();
    let mut triangles = Vec::new();
    let refs = x.member_refs();
    for v in 0..alg.n_vertices() {
        let sstalk = TwoTermComplex::shifted_stalk(alg.clone(), v);
        let tri = cocone_triangle(&refs, &sstalk)?;
        for part in decompose_tt(&tri.left)? {
            if class.contains_iso(&part).is_none() {
                class.members.push(part);
            }
        }
        triangles.push(tri);
    }
    class.sort();
    if class.e_part() != before {
        return Err(Error::CrossCheck(
            "completion on the cocone side changed the shifted-stalk part".into(),
        ));
    }
    Ok(Completion { class, triangles })
}

/// Module-side support test for the pair (cohomology modules, stalk
/// vertices): the module part must be rigid with respect to the translate,
/// the stalk vertices must be exactly the vertices whose projectives do not
/// map into the module part, and every projective must admit a minimal left
/// approximation into the module part whose cokernel stays inside it.
fn module_side_support_test(x: &TtClass) -> Result<bool> {
    let alg = x.alg.clone();
    let ms = x.h_modules();
    let e = x.e_part();

    // Pairwise vanishing of Hom(M_i, tau M_j): the module-side rigidity.
    let taus: Vec<Rep> = ms.iter().map(rep::ar_translate).collect();
    for m in &ms {
        for t in &taus {
            if !t.is_zero() && hom_dim(m, t) != 0 {
                return Ok(false);
            }
        }
    }

    // The stalk vertices must be exactly the annihilator of the module part.
    for v in 0..alg.n_vertices() {
        let pv = Rep::projective(alg.clone(), v);
        let killed = ms.iter().all(|m| hom_dim(&pv, m) == 0);
        if killed != e.contains(&v) {
            return Ok(false);
        }
    }

    // Every projective presents through the module part: minimal left
    // approximation with cokernel inside the additive closure.
    let refs: Vec<&Rep> = ms.iter().collect();
    for v in 0..alg.n_vertices() {
        let pv = Rep::projective(alg.clone(), v);
        let (f, m1) = left_approximation(&pv, &refs)?;
        let (cok, _) = cokernel(&f, &pv, &m1);
        if !in_add_reps(&cok, &ms)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn in_add_reps(m: &Rep, class: &[Rep]) -> Result<bool> {
    if m.is_zero() {
        return Ok(true);
    }
    for part in decompose_reps(m)? {
        if !class.iter().any(|c| is_isomorphic(&part, c)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether a rigid collection is complete: every projective stalk must fit
/// in a triangle (0 -> P) -> X1 -> X2 -> (0 -> P)[1] with X1 a minimal left
/// approximation by the collection and X2 its cone, both inside the additive
/// closure.  The equivalent module-side support test runs simultaneously;
/// any disagreement is a hard internal error, as is a complete collection
/// whose member count differs from the vertex count.
pub fn is_weak_cluster_tilting(x: &TtClass) -> Result<bool> {
    x.require_rigid()?;
    let alg = x.alg.clone();
    let refs = x.member_refs();

    let mut triangle_ok = true;
    'outer: for v in 0..alg.n_vertices() {
        let pstalk = TwoTermComplex::projective_stalk(alg.clone(), v);
        let tri = cone_triangle(&pstalk, &refs)?;
        // The middle lies in the additive closure by construction; the cone
        // must as well.
        for part in decompose_tt(&tri.right)? {
            if x.contains_iso(&part).is_none() {
                triangle_ok = false;
                break 'outer;
            }
        }
    }

    let module_ok = module_side_support_test(x)?;
    if triangle_ok != module_ok {
        return Err(Error::CrossCheck(format!(
            "triangle-side completeness ({triangle_ok}) disagrees with the module-side support test ({module_ok})"
        )));
    }
    if triangle_ok && x.len() != alg.n_vertices() {
        return Err(Error::CrossCheck(format!(
            "complete collection has {} members on {} vertices",
            x.len(),
            alg.n_vertices()
        )));
    }
    Ok(triangle_ok)
}

/// Report of the exhaustive scan certifying that exactly two completions
/// exist.
pub struct ExhaustiveScan {
    pub candidates_tested: usize,
}

/// Both completions of a rigid, non-complete collection.
pub struct CompletionPair {
    pub x: TtClass,
    /// Completion on the cone side (preserves the annihilator).
    pub m: Completion,
    /// Completion on the cocone side (preserves the shifted-stalk part).
    pub n: Completion,
    /// Present when the input was one member short of complete and the
    /// exhaustive exactly-two scan ran.
    pub scan: Option<ExhaustiveScan>,
}

/// Compute both completions of a rigid collection that is not yet complete.
/// The input is contained in both results, the results differ, and their
/// common members are exactly the input.  When the input has exactly one
/// member fewer than the vertex count, an exhaustive scan over all
/// indecomposable candidates (minimal presentations of every module in the
/// atlas plus every shifted stalk) certifies that no third completion
/// exists; the scan refuses to run on an incomplete atlas.
pub fn completions(x: &TtClass) -> Result<CompletionPair> {
    x.require_rigid()?;
    if is_weak_cluster_tilting(x)? {
        return Err(Error::AlreadyComplete);
    }
    let alg = x.alg.clone();
    let m = co_bongartz(x)?;
    let n = bongartz(x)?;
    for side in [&m, &n] {
        if !is_weak_cluster_tilting(&side.class)? {
            return Err(Error::CrossCheck(
                "constructed completion is not complete".into(),
            ));
        }
        for mem in &x.members {
            if side.class.contains_iso(mem).is_none() {
                return Err(Error::CrossCheck(
                    "completion lost a member of its input".into(),
                ));
            }
        }
    }
    if m.class.is_same(&n.class) {
        return Err(Error::CrossCheck(
            "the two completions coincide on a non-complete input".into(),
        ));
    }
    let mut common = 0usize;
    for mem in &m.class.members {
        if n.class.contains_iso(mem).is_some() {
            common += 1;
            if x.contains_iso(mem).is_none() {
                return Err(Error::CrossCheck(
                    "the completions share a member outside their input".into(),
                ));
            }
        }
    }
    if common != x.len() {
        return Err(Error::CrossCheck(
            "intersection of the two completions is not the input".into(),
        ));
    }
    let scan = if x.len() + 1 == alg.n_vertices() {
        Some(exactly_two_scan(x, &m.class, &n.class)?)
    } else {
        None
    };
    Ok(CompletionPair {
        x: x.clone(),
        m,
        n,
        scan,
    })
}

fn exactly_two_scan(x: &TtClass, m: &TtClass, n: &TtClass) -> Result<ExhaustiveScan> {
    let alg = x.alg.clone();
    let atlas = Atlas::knit(alg.clone())?;
    atlas.require_complete()?;
    let mut candidates: Vec<TwoTermComplex> = Vec::new();
    for md in &atlas.modules {
        candidates.push(TwoTermComplex::from_pair(md, &[]));
    }
    for v in 0..alg.n_vertices() {
        candidates.push(TwoTermComplex::shifted_stalk(alg.clone(), v));
    }
    let mut found: Vec<TtClass> = Vec::new();
    let mut tested = 0usize;
    for c in &candidates {
        if x.contains_iso(c).is_some() {
            continue;
        }
        tested += 1;
        let cand = x.with_member(c)?;
        let ok = match is_weak_cluster_tilting(&cand) {
            Ok(b) => b,
            Err(Error::NotRigid { .. }) => false,
            Err(e) => return Err(e),
        };
        if ok && !found.iter().any(|f| f.is_same(&cand)) {
            found.push(cand);
        }
    }
    if found.len() != 2 {
        return Err(Error::CrossCheck(format!(
            "exhaustive scan found {} completions instead of exactly two",
            found.len()
        )));
    }
    let matches = (found[0].is_same(m) && found[1].is_same(n))
        || (found[0].is_same(n) && found[1].is_same(m));
    if !matches {
        return Err(Error::CrossCheck(
            "exhaustive scan results differ from the constructed completion pair".into(),
        ));
    }
    Ok(ExhaustiveScan {
        candidates_tested: tested,
    })
}

/// Certificate for an exchange pair over a shared collection.
pub struct MutationCertificate {
    /// One triangle per member Y of the first side: left in add(second
    /// side), middle in add(shared), right = Y.
    pub m_triangles: Vec<ExchangeTriangle>,
    /// One triangle per member Z of the second side: left = Z, middle in
    /// add(shared), right in add(first side).
    pub n_triangles: Vec<ExchangeTriangle>,
}

/// Certify an exchange pair over a shared rigid collection `x`: both sides
/// must be complete and contain `x`; every member of `m` fits in a triangle
/// whose middle is a minimal approximation by `x` and whose third term lies
/// in `n` (dually for `n` against `m`); every connecting class factors
/// through shifted projective stalks; and recomputing the two completions of
/// `x` reproduces `m` on the cone side and `n` on the cocone side.
pub fn verify_mutation_pair(
    x: &TtClass,
    m: &TtClass,
    n: &TtClass,
) -> Result<MutationCertificate> {
    for mem in &x.members {
        if m.contains_iso(mem).is_none() || n.contains_iso(mem).is_none() {
            return Err(Error::Hypothesis(
                "the shared collection is not contained in both sides".into(),
            ));
        }
    }
    if !is_weak_cluster_tilting(m)? || !is_weak_cluster_tilting(n)? {
        return Err(Error::Hypothesis(
            "both sides of an exchange pair must be complete".into(),
        ));
    }
    let alg = x.alg.clone();
    let refs = x.member_refs();
    let almost = x.len() + 1 == alg.n_vertices();

    let mut m_triangles = Vec::new();
    for (i, y) in m.members.iter().enumerate() {
        let tri = cocone_triangle(&refs, y)?;
        let parts = decompose_tt(&tri.left)?;
        for part in &parts {
            if n.contains_iso(part).is_none() {
                return Err(Error::CrossCheck(format!(
                    "third term of the exchange triangle for member {i} leaves the opposite side"
                )));
            }
        }
        if almost && x.contains_iso(y).is_none() {
            // The exchanged member: its third term is a single new
            // indecomposable outside the shared collection.
            if parts.len() != 1 || x.contains_iso(&parts[0]).is_some() {
                return Err(Error::CrossCheck(format!(
                    "exchange triangle for member {i} does not produce a single fresh indecomposable"
                )));
            }
        }
        if !tri.connecting_factors {
            return Err(Error::CrossCheck(format!(
                "connecting class of the triangle for member {i} fails to factor through shifted stalks"
            )));
        }
        m_triangles.push(tri);
    }

    let mut n_triangles = Vec::new();
    for (i, z) in n.members.iter().enumerate() {
        let tri = cone_triangle(z, &refs)?;
        let parts = decompose_tt(&tri.right)?;
        for part in &parts {
            if m.contains_iso(part).is_none() {
                return Err(Error::CrossCheck(format!(
                    "third term of the dual exchange triangle for member {i} leaves the opposite side"
                )));
            }
        }
        if almost && x.contains_iso(z).is_none()
            && (parts.len() != 1 || x.contains_iso(&parts[0]).is_some()) {
                return Err(Error::CrossCheck(format!(
                    "dual exchange triangle for member {i} does not produce a single fresh indecomposable"
                )));
            }
        if !tri.connecting_factors {
            return Err(Error::CrossCheck(format!(
                "connecting class of the dual triangle for member {i} fails to factor through shifted stalks"
            )));
        }
        n_triangles.push(tri);
    }

    // Uniqueness direction: the pair must be the canonical completion pair.
    let mx = co_bongartz(x)?;
    let nx = bongartz(x)?;
    if !m.is_same(&mx.class) || !n.is_same(&nx.class) {
        return Err(Error::CrossCheck(
            "the pair does not match the recomputed completions of the shared collection".into(),
        ));
    }

    Ok(MutationCertificate {
        m_triangles,
        n_triangles,
    })
}

/// Which side of the completion pair a mutation result lies on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExchangeSide {
    /// The result preserves the shifted-stalk part of the shared collection.
    Bongartz,
    /// The result preserves the annihilator of the shared collection.
    CoBongartz,
}

/// Exchange one member of a complete collection: the remaining members admit
/// exactly two completions, one of which is the input; the other is
/// returned, together with the side it sits on.
pub fn mutation(t: &TtClass, idx: usize) -> Result<(TtClass, ExchangeSide)> {
    if idx >= t.len() {
        return Err(Error::Input(format!("member index {idx} out of range")));
    }
    if !is_weak_cluster_tilting(t)? {
        return Err(Error::Hypothesis(
            "mutation requires a complete collection".into(),
        ));
    }
    let x = t.without_member(idx);
    let m = co_bongartz(&x)?;
    let n = bongartz(&x)?;
    if m.class.is_same(&n.class) {
        return Err(Error::CrossCheck(
            "both completions of the punctured collection coincide".into(),
        ));
    }
    if t.is_same(&m.class) {
        Ok((n.class, ExchangeSide::Bongartz))
    } else if t.is_same(&n.class) {
        Ok((m.class, ExchangeSide::CoBongartz))
    } else {
        Err(Error::CrossCheck(
            "the input is not among the two completions of its punctured collection".into(),
        ))
    }
}

/// Budget for the exchange-graph closure.
pub struct GraphBudget {
    pub max_vertices: usize,
}

impl Default for GraphBudget {
    fn default() -> Self {
        GraphBudget { max_vertices: 4096 }
    }
}

/// One exchange edge; the two endpoints are the two completions of a shared
/// punctured collection.  The cocone-side endpoint generates the larger
/// torsion class of the two.
pub struct ExchangeEdge {
    /// Vertex preserving the shifted-stalk part of the shared collection.
    pub bongartz_side: usize,
    /// Vertex preserving the annihilator of the shared collection.
    pub co_bongartz_side: usize,
}

pub struct ExchangeGraph {
    pub vertices: Vec<TtClass>,
    pub edges: Vec<ExchangeEdge>,
    pub complete: bool,
    pub note: Option<String>,
}

/// Breadth-first closure of single-member exchanges starting from the
/// projective stalks.  Deterministic: vertices are numbered in discovery
/// order and edges sorted.  Exceeding the vertex budget stops the closure
/// and flags the graph incomplete.
pub fn exchange_graph(alg: &AlgRef, budget: &GraphBudget) -> Result<ExchangeGraph> {
    let start = TtClass::projectives(alg);
    let mut vertices: Vec<TtClass> = vec![start];
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut queue: VecDeque<usize> = VecDeque::from([0usize]);
    let mut complete = true;
    let mut note = None;
    'bfs: while let Some(ti) = queue.pop_front() {
        let t = vertices[ti].clone();
        for idx in 0..t.len() {
            let x = t.without_member(idx);
            let m = co_bongartz(&x)?.class;
            let n = bongartz(&x)?.class;
            let t_is_m = t.is_same(&m);
            let t_is_n = t.is_same(&n);
            if !t_is_m && !t_is_n {
                return Err(Error::CrossCheck(
                    "an exchange step did not recover the source vertex".into(),
                ));
            }
            let other = if t_is_m { &n } else { &m };
            let oi = match vertices.iter().position(|w| w.is_same(other)) {
                Some(i) => i,
                None => {
                    if vertices.len() >= budget.max_vertices {
                        complete = false;
                        note = Some(format!(
                            "vertex budget {} reached; closure truncated",
                            budget.max_vertices
                        ));
                        break 'bfs;
                    }
                    vertices.push(other.clone());
                    queue.push_back(vertices.len() - 1);
                    vertices.len() - 1
                }
            };
            let pair = if t_is_n { (ti, oi) } else { (oi, ti) };
            if !edges.contains(&pair) {
                edges.push(pair);
            }
        }
    }
    edges.sort_unstable();
    Ok(ExchangeGraph {
        vertices,
        edges: edges
            .into_iter()
            .map(|(b, c)| ExchangeEdge {
                bongartz_side: b,
                co_bongartz_side: c,
            })
            .collect(),
        complete,
        note,
    })
}

/// All complete collections reachable by exchanges from the projective
/// stalks, plus whether the closure terminated within budget.
pub fn sttilt_classes(alg: &AlgRef, budget: &GraphBudget) -> Result<(Vec<TtClass>, bool)> {
    let g = exchange_graph(alg, budget)?;
    Ok((g.vertices, g.complete))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Algebra;
    use crate::twoterm::hom_k_shift1;

    fn a_n(n: usize) -> AlgRef {
        Algebra::linear_an(n, crate::fp::DEFAULT_PRIME)
    }

    fn pres_simple(alg: &AlgRef, v: usize) -> TwoTermComplex {
        TwoTermComplex::from_pair(&Rep::simple(alg.clone(), v), &[])
    }

    fn class(alg: &AlgRef, objs: &[TwoTermComplex]) -> TtClass {
        TtClass::new(alg, objs).unwrap()
    }

    #[test]
    fn annihilator_examples() {
        let alg = a_n(2);
        let x = pres_simple(&alg, 0);
        let gamma = TtClass::projectives(&alg);
        assert_eq!(r_annihilator(&gamma).unwrap(), Vec::<usize>::new());
        assert_eq!(r_annihilator(&class(&alg, std::slice::from_ref(&x))).unwrap(), vec![1]);
        assert_eq!(r_annihilator(&TtClass::empty(&alg)).unwrap(), vec![0, 1]);

        let g1 = TwoTermComplex::projective_stalk(alg.clone(), 0);
        let sv1 = TwoTermComplex::shifted_stalk(alg.clone(), 1);
        let bad = class(&alg, &[sv1, g1]);
        match r_annihilator(&bad) {
            Err(Error::NotRigid { .. }) => {}
            other => panic!("expected a rigidity error, got {:?}", other.map(|_| ())),
        }
    }

    #[test]
    fn completion_examples_on_two_vertices() {
        let alg = a_n(2);
        let x = pres_simple(&alg, 0);
        let g1 = TwoTermComplex::projective_stalk(alg.clone(), 0);
        let sv0 = TwoTermComplex::shifted_stalk(alg.clone(), 0);
        let sv1 = TwoTermComplex::shifted_stalk(alg.clone(), 1);
        let gamma = TtClass::projectives(&alg);

        // Empty input: the cone side completes to all shifted stalks, the
        // cocone side to the projective stalks.
        let empty = TtClass::empty(&alg);
        let m0 = co_bongartz(&empty).unwrap();
        assert!(m0.class.is_same(&class(&alg, &[sv0.clone(), sv1.clone()])));
        let n0 = bongartz(&empty).unwrap();
        assert!(n0.class.is_same(&gamma));

        // Complete input: both sides are identities.
        assert!(co_bongartz(&gamma).unwrap().class.is_same(&gamma));
        assert!(bongartz(&gamma).unwrap().class.is_same(&gamma));

        // The presentation of the top simple completes to (S, stalk) on the
        // cone side and (P1 + S, nothing) on the cocone side.
        let xc = class(&alg, std::slice::from_ref(&x));
        let mx = co_bongartz(&xc).unwrap();
        assert!(mx.class.is_same(&class(&alg, &[x.clone(), sv1.clone()])));
        assert_eq!(mx.class.e_part(), vec![1]);
        let nx = bongartz(&xc).unwrap();
        assert!(nx.class.is_same(&class(&alg, &[x.clone(), g1.clone()])));
        assert_eq!(nx.class.e_part(), Vec::<usize>::new());

        // The nontrivial cocone triangle carries a nonzero connecting class
        // that factors through shifted stalks.
        let tri = &nx.triangles[1];
        assert!(is_iso_tt(&tri.right, &sv1));
        assert!(is_iso_tt(&tri.left, &g1));
        assert!(is_iso_tt(&tri.middle, &x));
        let hs = hom_k_shift1(&tri.right, &tri.left);
        assert_eq!(hs.dim, 1);
        assert!(!hs.is_zero_class(&tri.connecting));
        assert!(tri.connecting_factors);
    }

    #[test]
    fn completeness_test_examples() {
        let alg = a_n(2);
        let x = pres_simple(&alg, 0);
        let g1 = TwoTermComplex::projective_stalk(alg.clone(), 0);
        let sv0 = TwoTermComplex::shifted_stalk(alg.clone(), 0);
        let sv1 = TwoTermComplex::shifted_stalk(alg.clone(), 1);
        let gamma = TtClass::projectives(&alg);

        assert!(is_weak_cluster_tilting(&gamma).unwrap());
        assert!(!is_weak_cluster_tilting(&class(&alg, std::slice::from_ref(&x))).unwrap());
        assert!(is_weak_cluster_tilting(&class(&alg, &[x.clone(), sv1.clone()])).unwrap());
        assert!(is_weak_cluster_tilting(&class(&alg, &[x.clone(), g1.clone()])).unwrap());
        assert!(is_weak_cluster_tilting(&class(&alg, &[sv0, sv1])).unwrap());
        assert!(!is_weak_cluster_tilting(&TtClass::empty(&alg)).unwrap());
    }

    #[test]
    fn completions_of_the_simple_presentation() {
        let alg = a_n(2);
        let x = pres_simple(&alg, 0);
        let g1 = TwoTermComplex::projective_stalk(alg.clone(), 0);
        let sv1 = TwoTermComplex::shifted_stalk(alg.clone(), 1);

        let pair = completions(&class(&alg, std::slice::from_ref(&x))).unwrap();
        assert!(pair.m.class.is_same(&class(&alg, &[x.clone(), sv1])));
        assert!(pair.n.class.is_same(&class(&alg, &[x.clone(), g1])));
        let scan = pair.scan.expect("the input is one member short");
        assert!(scan.candidates_tested >= 3);

        // A complete input is refused with the dedicated error.
        let gamma = TtClass::projectives(&alg);
        match completions(&gamma) {
            Err(Error::AlreadyComplete) => {}
            other => panic!("expected the already-complete error, got {:?}", other.map(|_| ())),
        }
        assert_eq!(
            Error::AlreadyComplete.to_string(),
            "X is weak cluster tilting; nothing to complete"
        );
    }

    #[test]
    fn completions_of_a_projective_stalk() {
        let alg = a_n(2);
        let x = pres_simple(&alg, 0);
        let g1 = TwoTermComplex::projective_stalk(alg.clone(), 0);
        let gamma = TtClass::projectives(&alg);

        let pair = completions(&class(&alg, std::slice::from_ref(&g1))).unwrap();
        assert!(pair.m.class.is_same(&class(&alg, &[g1, x])));
        assert!(pair.n.class.is_same(&gamma));
        assert!(pair.scan.is_some());
    }

    #[test]
    fn mutation_pair_certificates() {
        let alg = a_n(2);
        let x = pres_simple(&alg, 0);
        let g1 = TwoTermComplex::projective_stalk(alg.clone(), 0);
        let sv1 = TwoTermComplex::shifted_stalk(alg.clone(), 1);

        let shared = class(&alg, std::slice::from_ref(&x));
        let m = class(&alg, &[x.clone(), sv1.clone()]);
        let n = class(&alg, &[x.clone(), g1.clone()]);
        let cert = verify_mutation_pair(&shared, &m, &n).unwrap();
        assert_eq!(cert.m_triangles.len(), 2);
        assert_eq!(cert.n_triangles.len(), 2);
        // The nontrivial triangle exchanges the stalk against the projective.
        let tri = cert
            .m_triangles
            .iter()
            .find(|t| is_iso_tt(&t.right, &sv1))
            .expect("triangle for the exchanged member");
        assert!(is_iso_tt(&tri.left, &g1));
        assert!(is_iso_tt(&tri.middle, &x));
        assert!(tri.connecting_factors);

        // Swapping the sides must fail the recomputation check.
        assert!(verify_mutation_pair(&shared, &n, &m).is_err());

        // The degenerate certificate on a complete collection passes with
        // trivial triangles.
        let gamma = TtClass::projectives(&alg);
        let cert = verify_mutation_pair(&gamma, &gamma, &gamma).unwrap();
        assert!(cert.m_triangles.iter().all(|t| t.left.is_zero()));
        assert!(cert.n_triangles.iter().all(|t| t.right.is_zero()));
    }

    #[test]
    fn mutation_swaps_between_the_two_completions() {
        let alg = a_n(2);
        let gamma = TtClass::projectives(&alg);
        let (t1, side1) = mutation(&gamma, 0).unwrap();
        assert!(!t1.is_same(&gamma));
        // Mutating the fresh member leads back.
        let fresh = t1
            .members
            .iter()
            .position(|mm| gamma.contains_iso(mm).is_none())
            .unwrap();
        let (t2, side2) = mutation(&t1, fresh).unwrap();
        assert!(t2.is_same(&gamma));
        assert_ne!(side1, side2);
    }

    #[test]
    fn exchange_graph_counts_on_paths() {
        let a1 = a_n(1);
        let g = exchange_graph(&a1, &GraphBudget::default()).unwrap();
        assert!(g.complete);
        assert_eq!(g.vertices.len(), 2);
        assert_eq!(g.edges.len(), 1);
        assert_eq!(g.edges[0].bongartz_side, 0);
        assert_eq!(g.edges[0].co_bongartz_side, 1);
        assert_eq!(g.vertices[1].e_part(), vec![0]);

        let a2 = a_n(2);
        let g = exchange_graph(&a2, &GraphBudget::default()).unwrap();
        assert!(g.complete);
        assert_eq!(g.vertices.len(), 5);
        assert_eq!(g.edges.len(), 5);
        // A cycle: every vertex has degree two.
        let mut deg = [0usize; 5];
        for e in &g.edges {
            deg[e.bongartz_side] += 1;
            deg[e.co_bongartz_side] += 1;
        }
        assert!(deg.iter().all(|&d| d == 2));
    }

    #[test]
    fn exchange_graph_of_the_three_vertex_path() {
        let alg = a_n(3);
        let g = exchange_graph(&alg, &GraphBudget::default()).unwrap();
        assert!(g.complete);
        assert_eq!(g.vertices.len(), 14);
        assert_eq!(g.edges.len(), 21);
        // Every vertex is complete and has one exchange per member.
        for v in &g.vertices {
            assert_eq!(v.len(), 3);
            assert!(is_weak_cluster_tilting(v).unwrap());
        }
    }

    #[test]
    fn exchange_graph_budget_is_flagged() {
        let alg = a_n(2);
        let g = exchange_graph(&alg, &GraphBudget { max_vertices: 2 }).unwrap();
        assert!(!g.complete);
        assert!(g.note.is_some());
        assert!(g.vertices.len() <= 2);
    }

    #[test]
    fn window_instance_on_the_radical_cube_truncation() {
        // Four-vertex path with all length-three paths killed.  The three
        // marked intervals (one outer-row interval of full length, two
        // bottom-row simples) form a rigid collection with exactly two
        // completions, one adjoining a middle-row interval on the cone side
        // and one adjoining an outer-row interval on the cocone side; both
        // completions have an empty stalk part.
        let alg = Algebra::linear_an_nilpotent(4, 3, crate::fp::DEFAULT_PRIME);
        let pres = |lo: usize, hi: usize| {
            TwoTermComplex::from_pair(&Rep::interval(alg.clone(), lo, hi).unwrap(), &[])
        };
        let x = class(&alg, &[pres(0, 2), pres(1, 1), pres(3, 3)]);
        assert!(x.is_rigid());
        assert!(!is_weak_cluster_tilting(&x).unwrap());
        let pair = completions(&x).unwrap();
        assert!(pair.scan.is_some());
        assert!(pair
            .m
            .class
            .is_same(&class(&alg, &[pres(0, 2), pres(1, 1), pres(3, 3), pres(0, 1)])));
        assert!(pair
            .n
            .class
            .is_same(&class(&alg, &[pres(0, 2), pres(1, 1), pres(3, 3), pres(1, 3)])));
        assert_eq!(pair.m.class.e_part(), Vec::<usize>::new());
        assert_eq!(pair.n.class.e_part(), Vec::<usize>::new());
        verify_mutation_pair(&x, &pair.m.class, &pair.n.class).unwrap();
    }

    #[test]
    fn exchange_graph_of_the_radical_cube_truncation() {
        let alg = Algebra::linear_an_nilpotent(4, 3, crate::fp::DEFAULT_PRIME);
        let g = exchange_graph(&alg, &GraphBudget::default()).unwrap();
        assert!(g.complete);
        assert_eq!(g.vertices.len(), 37);
        assert_eq!(g.edges.len(), 74);
        let mut deg = vec![0usize; g.vertices.len()];
        for e in &g.edges {
            deg[e.bongartz_side] += 1;
            deg[e.co_bongartz_side] += 1;
        }
        assert!(deg.iter().all(|&d| d == 4));
    }

    #[test]
    fn every_almost_complete_collection_certifies_on_the_three_vertex_path() {
        let alg = a_n(3);
        let g = exchange_graph(&alg, &GraphBudget::default()).unwrap();
        let mut punctured: Vec<TtClass> = Vec::new();
        for t in &g.vertices {
            for idx in 0..t.len() {
                let x = t.without_member(idx);
                if !punctured.iter().any(|w| w.is_same(&x)) {
                    punctured.push(x);
                }
            }
        }
        assert_eq!(punctured.len(), 21);
        for x in &punctured {
            let pair = completions(x).unwrap();
            assert!(pair.scan.is_some());
            verify_mutation_pair(x, &pair.m.class, &pair.n.class).unwrap();
        }
    }
}
