//! An atlas of indecomposable modules: the closure of the projectives and
//! injectives under the translate, its inverse, and almost-split middle
//! terms, deduplicated up to isomorphism.
//!
//! Completeness argument: the returned set contains every indecomposable
//! projective and injective, the summands of each radical and each
//! socle-quotient, and is closed under the translate in both directions and
//! under taking summands of the middle term of the almost-split sequence
//! ending at each non-projective member. A finite set with those closure
//! properties is a union of translation-quiver components that includes all
//! projectives, and for a finite-dimensional algebra a finite component is
//! everything. The certificate additionally needs every member to have
//! endomorphism quotient equal to the ground field (so the unique nonzero
//! class up to scalar is the almost-split one); atlases where that fails are
//! reported incomplete rather than wrongly certified.

use crate::algebra::AlgRef;
use crate::error::{Error, Result};
use crate::fp::Mat;
use crate::rep::{
    decompose_reps, end_radical, ext1_classes, extension_middle, hom_basis, inverse_ar_translate,
    is_isomorphic, quotient_by_rows, radical, socle, ar_translate, Rep, RepHom,
};

pub const DEFAULT_MAX_MODULES: usize = 512;
pub const DEFAULT_MAX_TOTAL_DIM: usize = 96;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AtlasBudget {
    pub max_modules: usize,
    pub max_total_dim: usize,
}

impl Default for AtlasBudget {
    fn default() -> Self {
        AtlasBudget { max_modules: DEFAULT_MAX_MODULES, max_total_dim: DEFAULT_MAX_TOTAL_DIM }
    }
}

#[derive(Debug)]
pub struct Atlas {
    pub alg: AlgRef,
    /// Pairwise non-isomorphic indecomposables, in discovery order.
    pub modules: Vec<Rep>,
    pub complete: bool,
    /// Why the atlas is incomplete, when it is.
    pub note: Option<String>,
    /// Atlas index of each indecomposable projective / injective by vertex.
    pub proj_idx: Vec<usize>,
    pub inj_idx: Vec<usize>,
    /// Translate data: atlas index of the translate, None when it is zero.
    pub tau: Vec<Option<usize>>,
    pub tau_inv: Vec<Option<usize>>,
}

impl Atlas {
    /// Knit the atlas under the default budget.
    pub fn knit(alg: AlgRef) -> Result<Atlas> {
        Atlas::knit_with(alg, AtlasBudget::default())
    }

    pub fn knit_with(alg: AlgRef, budget: AtlasBudget) -> Result<Atlas> {
        let nv = alg.n_vertices();
        let mut modules: Vec<Rep> = Vec::new();
        let mut over_budget: Option<String> = None;

        // Insert up to isomorphism; record budget breaches.
        fn find(modules: &[Rep], m: &Rep) -> Option<usize> {
            modules.iter().position(|x| is_isomorphic(x, m))
        }
        let insert = |modules: &mut Vec<Rep>,
                          over: &mut Option<String>,
                          m: Rep|
         -> Option<usize> {
            if m.is_zero() {
                return None;
            }
            if let Some(i) = find(modules, &m) {
                return Some(i);
            }
            if m.total_dim() > budget.max_total_dim {
                *over = Some(format!(
                    "an indecomposable of dimension {} exceeds the dimension budget {}",
                    m.total_dim(),
                    budget.max_total_dim
                ));
                return None;
            }
            if modules.len() >= budget.max_modules {
                *over = Some(format!(
                    "more than {} indecomposables; stopped knitting",
                    budget.max_modules
                ));
                return None;
            }
            modules.push(m);
            Some(modules.len() - 1)
        };

        // Seeds: projectives, injectives, radical summands, socle-quotient
        // summands.
        let mut proj_idx = Vec::with_capacity(nv);
        let mut inj_idx = Vec::with_capacity(nv);
        for v in 0..nv {
            let pv = Rep::projective(alg.clone(), v);
            let iv = Rep::injective(alg.clone(), v);
            let (radp, _) = radical(&pv);
            let (_, soc_incl) = socle(&iv);
            let (socq, _) = quotient_by_rows(&iv, &soc_incl.blocks);
            let pi = insert(&mut modules, &mut over_budget, pv);
            let ii = insert(&mut modules, &mut over_budget, iv);
            let (pi, ii) = match (pi, ii) {
                (Some(a), Some(b)) => (a, b),
                // Budget too small even for the seeds: report what we have.
                _ => {
                    return Ok(Atlas {
                        alg,
                        modules,
                        complete: false,
                        note: over_budget,
                        proj_idx: Vec::new(),
                        inj_idx: Vec::new(),
                        tau: Vec::new(),
                        tau_inv: Vec::new(),
                    })
                }
            };
            proj_idx.push(pi);
            inj_idx.push(ii);
            for s in decompose_reps(&radp)? {
                insert(&mut modules, &mut over_budget, s);
            }
            for s in decompose_reps(&socq)? {
                insert(&mut modules, &mut over_budget, s);
            }
        }

        // Closure loop.
        let mut cursor = 0;
        while cursor < modules.len() {
            if over_budget.is_some() {
                break;
            }
            let m = modules[cursor].clone();
            let t = ar_translate(&m);
            for s in decompose_reps(&t)? {
                insert(&mut modules, &mut over_budget, s);
            }
            let ti = inverse_ar_translate(&m)?;
            for s in decompose_reps(&ti)? {
                insert(&mut modules, &mut over_budget, s);
            }
            // Middle term of the almost-split sequence ending here.
            if !t.is_zero() {
                let ext = ext1_classes(&m, &t);
                if ext.dim() == 0 {
                    return Err(Error::CrossCheck(
                        "no extension of a non-projective by its translate".into(),
                    ));
                }
                let e = extension_middle(&m, &t, &ext, &ext.class_reps[0]);
                for s in decompose_reps(&e.middle)? {
                    insert(&mut modules, &mut over_budget, s);
                }
            }
            cursor += 1;
        }

        // An interrupted knit must not publish translate tables: a lookup
        // miss there would be indistinguishable from a genuine zero.
        if over_budget.is_some() {
            return Ok(Atlas {
                alg,
                modules,
                complete: false,
                note: over_budget,
                proj_idx,
                inj_idx,
                tau: Vec::new(),
                tau_inv: Vec::new(),
            });
        }

        // Certificate side condition: every endomorphism quotient must be
        // the ground field for the middle-term closure to see every
        // almost-split sequence.
        let mut note = over_budget.clone();
        if note.is_none() {
            for m in &modules {
                let (_, db, _) = end_radical(m)?;
                if db != 1 {
                    note = Some(
                        "an indecomposable has endomorphism quotient larger than the \
                         ground field; completeness cannot be certified"
                            .into(),
                    );
                    break;
                }
            }
        }
        let complete = note.is_none();

        // Translate tables (only meaningful on the knitted set).
        let mut tau = Vec::with_capacity(modules.len());
        let mut tau_inv = Vec::with_capacity(modules.len());
        for m in &modules {
            let t = ar_translate(m);
            tau.push(if t.is_zero() { None } else { find(&modules, &t) });
            let ti = inverse_ar_translate(m)?;
            tau_inv.push(if ti.is_zero() { None } else { find(&modules, &ti) });
        }

        Ok(Atlas { alg, modules, complete, note, proj_idx, inj_idx, tau, tau_inv })
    }

    pub fn len(&self) -> usize {
        self.modules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modules.is_empty()
    }

    pub fn find(&self, m: &Rep) -> Option<usize> {
        self.modules.iter().position(|x| is_isomorphic(x, m))
    }

    /// Error out unless the atlas is certified complete.
    pub fn require_complete(&self) -> Result<()> {
        if self.complete {
            Ok(())
        } else {
            Err(Error::IncompleteAtlas(
                self.note.clone().unwrap_or_else(|| "atlas incomplete".into()),
            ))
        }
    }

    pub fn is_projective(&self, i: usize) -> bool {
        self.tau[i].is_none()
    }

    pub fn is_injective(&self, i: usize) -> bool {
        self.tau_inv[i].is_none()
    }

    /// Arrows of the translation quiver with multiplicities, computed from
    /// radical quotients of hom spaces over the full atlas:
    /// mult(x -> y) = dim rad(x,y)/rad^2(x,y).
    pub fn ar_arrows(&self) -> Result<Vec<(usize, usize, usize)>> {
        self.require_complete()?;
        let n = self.modules.len();
        let p = self.alg.p;
        // rad(x, y) bases as flattened rows.
        let mut rad_flat: Vec<Vec<Vec<Mat>>> = vec![vec![Vec::new(); n]; n];
        let mut rad_homs: Vec<Vec<Vec<RepHom>>> = vec![vec![Vec::new(); n]; n];
        for x in 0..n {
            for y in 0..n {
                let homs = if x == y {
                    let (_, _, r) = end_radical(&self.modules[x])?;
                    r
                } else {
                    hom_basis(&self.modules[x], &self.modules[y])
                };
                for f in homs {
                    rad_flat[x][y].push(f.flatten(p));
                    rad_homs[x][y].push(f);
                }
            }
        }
        let mut arrows = Vec::new();
        for x in 0..n {
            for y in 0..n {
                if rad_homs[x][y].is_empty() {
                    continue;
                }
                let cols = rad_flat[x][y][0].cols;
                let mut rad_mat = Mat::zeros(p, 0, cols);
                for r in &rad_flat[x][y] {
                    rad_mat = rad_mat.vstack(r);
                }
                let rad_dim = rad_mat.rank();
                // rad^2: compositions through every atlas module.
                let mut rad2 = Mat::zeros(p, 0, cols);
                for z in 0..n {
                    for f in &rad_homs[x][z] {
                        for g in &rad_homs[z][y] {
                            rad2 = rad2.vstack(&f.then(g).flatten(p)).row_basis();
                        }
                    }
                }
                let rad2_dim = rad2.rank();
                if rad_dim > rad2_dim {
                    arrows.push((x, y, rad_dim - rad2_dim));
                }
            }
        }
        Ok(arrows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Algebra, Arrow, Quiver};

    #[test]
    fn atlas_of_a2() {
        let a = Algebra::linear_an(2, 32003);
        let atlas = Atlas::knit(a.clone()).unwrap();
        assert!(atlas.complete);
        assert_eq!(atlas.len(), 3);
        // P1, P2 = S2, S1.
        let s1 = Rep::simple(a.clone(), 0);
        assert!(atlas.find(&s1).is_some());
    }

    #[test]
    fn atlas_of_a3_and_a4() {
        let a3 = Algebra::linear_an(3, 32003);
        let atlas3 = Atlas::knit(a3).unwrap();
        assert!(atlas3.complete);
        assert_eq!(atlas3.len(), 6);

        let a4 = Algebra::linear_an(4, 32003);
        let atlas4 = Atlas::knit(a4).unwrap();
        assert!(atlas4.complete);
        assert_eq!(atlas4.len(), 10);
    }

    #[test]
    fn atlas_of_a4_radical_cube() {
        let a = Algebra::linear_an_nilpotent(4, 3, 32003);
        let atlas = Atlas::knit(a.clone()).unwrap();
        assert!(atlas.complete);
        // Exactly the interval modules [i, j] with j - i <= 2.
        assert_eq!(atlas.len(), 9);
        for lo in 0..4 {
            for hi in lo..4.min(lo + 3) {
                if hi - lo <= 2 {
                    let m = Rep::interval(a.clone(), lo, hi).unwrap();
                    assert!(atlas.find(&m).is_some(), "missing interval [{lo},{hi}]");
                }
            }
        }
    }

    #[test]
    fn translate_tables_are_mutually_inverse() {
        let a = Algebra::linear_an(3, 32003);
        let atlas = Atlas::knit(a).unwrap();
        for i in 0..atlas.len() {
            if let Some(t) = atlas.tau[i] {
                assert_eq!(atlas.tau_inv[t], Some(i));
            }
            if let Some(t) = atlas.tau_inv[i] {
                assert_eq!(atlas.tau[t], Some(i));
            }
        }
        // Projectives have no translate, injectives no inverse translate.
        for v in 0..3 {
            assert!(atlas.tau[atlas.proj_idx[v]].is_none());
            assert!(atlas.tau_inv[atlas.inj_idx[v]].is_none());
        }
    }

    #[test]
    fn atlas_of_cyclic_nakayama() {
        // Oriented 3-cycle with all length-2 paths zero: self-injective,
        // 6 indecomposables (3 projectives, 3 simples).
        let q = Quiver {
            vertex_ids: vec![1, 2, 3],
            arrows: vec![
                Arrow { id: 1, from: 0, to: 1 },
                Arrow { id: 2, from: 1, to: 2 },
                Arrow { id: 3, from: 2, to: 0 },
            ],
        };
        let rels = vec![
            vec![(1, vec![1, 2])],
            vec![(1, vec![2, 3])],
            vec![(1, vec![3, 1])],
        ];
        let a = Algebra::build(q, &rels, 32003).unwrap();
        assert_eq!(a.dim(), 6);
        let atlas = Atlas::knit(a).unwrap();
        assert!(atlas.complete, "note: {:?}", atlas.note);
        assert_eq!(atlas.len(), 6);
    }

    #[test]
    fn ar_arrows_of_a2() {
        let a = Algebra::linear_an(2, 32003);
        let atlas = Atlas::knit(a.clone()).unwrap();
        let arrows = atlas.ar_arrows().unwrap();
        // P2 -> P1 -> S1, each with multiplicity 1.
        assert_eq!(arrows.len(), 2);
        assert!(arrows.iter().all(|&(_, _, m)| m == 1));
        let p1 = atlas.find(&Rep::projective(a.clone(), 0)).unwrap();
        let p2 = atlas.find(&Rep::projective(a.clone(), 1)).unwrap();
        let s1 = atlas.find(&Rep::simple(a.clone(), 0)).unwrap();
        assert!(arrows.contains(&(p2, p1, 1)));
        assert!(arrows.contains(&(p1, s1, 1)));
    }

    #[test]
    fn budget_refusal_is_flagged() {
        let a = Algebra::linear_an(4, 32003);
        let atlas =
            Atlas::knit_with(a, AtlasBudget { max_modules: 4, max_total_dim: 96 }).unwrap();
        assert!(!atlas.complete);
        assert!(atlas.require_complete().is_err());
    }
}
