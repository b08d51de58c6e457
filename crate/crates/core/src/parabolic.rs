//! Parabolic (Levi) subalgebras `H_M` inside `H`.
//!
//! A [`ParabolicCtx`] fixes a subset of the simple roots and carries the
//! derived combinatorics: the Levi sub-datum (with its own Weyl table and
//! modulus), minimal coset representatives, the longest elements `w0''` and
//! `w0'`, and the conjugate Levi `M' = w0'^{-1} M w0'`. Levi elements live in
//! the algebra of the sub-datum and embed into the ambient algebra by
//! relabeling; the two freeness decompositions and the conjugation transport
//! `gamma: H_{M'} -> H_M` are computed here.

use crate::error::{CoreError, Result};
use crate::hecke::{embed_levi, restrict_to_levi, star_b, star_im, t_inv, HeckeElt, Terms};
use crate::rootdata::{LeviSet, RootDatum, WeylId};
use std::collections::BTreeMap;
use std::sync::Arc;

/// Which of the two opposition anti-maps drives a transport formula.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum StarKind {
    /// `star_b`: the generator rules as written (`T_{w_0}^{-1} .. T_{w_0}`).
    B,
    /// `star_im`: `T_x -> T_{x^{-1}}`, realizing the mirrored sandwich.
    Im,
}

/// Sandwich orientation of the transported opposition.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Orientation {
    /// `T_{w0'}^{-1} ( gamma(..) ) T_{w0'}`
    AsWritten,
    /// `T_{w0'} ( gamma(..) ) T_{w0'}^{-1}`
    Mirrored,
}

pub struct ParabolicCtx {
    ambient: Arc<RootDatum>,
    levi: LeviSet,
    levi_datum: Arc<RootDatum>,
    conj_levi: LeviSet,
    conj_datum: Arc<RootDatum>,
    w0p: WeylId,
    w0pp: WeylId,
    coset_reps: Vec<WeylId>,
    right_reps: Vec<WeylId>,
}

impl ParabolicCtx {
    pub fn new(ambient: &Arc<RootDatum>, levi: LeviSet) -> Result<Self> {
        let levi_datum = ambient.levi_datum(&levi)?;
        let (conj_levi, w0p) = ambient.conjugate_levi(&levi)?;
        let conj_datum = ambient.levi_datum(&conj_levi)?;
        let w0pp = ambient.longest_element(&levi);
        let coset_reps = ambient.min_coset_reps(&levi);
        // minimal representatives of W / W_{M'}: inverses of ^{M'}W
        let mut right_reps: Vec<WeylId> = ambient
            .min_coset_reps(&conj_levi)
            .into_iter()
            .map(|w| ambient.winv(w))
            .collect();
        right_reps.sort_by(|&a, &b| {
            (ambient.length(a), ambient.word(a)).cmp(&(ambient.length(b), ambient.word(b)))
        });
        let ctx = Self {
            ambient: ambient.clone(),
            levi,
            levi_datum,
            conj_levi,
            conj_datum,
            w0p,
            w0pp,
            coset_reps,
            right_reps,
        };
        // |W| = |W_M| * |^M W| and w_0 = w0'' w0' with additive lengths
        debug_assert_eq!(
            ctx.ambient.weyl_order(),
            ctx.levi_datum.weyl_order() * ctx.coset_reps.len()
        );
        debug_assert_eq!(ctx.ambient.wmul(ctx.w0pp, ctx.w0p), ctx.ambient.w0());
        debug_assert_eq!(
            ctx.ambient.length(ctx.ambient.w0()),
            ctx.ambient.length(ctx.w0pp) + ctx.ambient.length(ctx.w0p)
        );
        Ok(ctx)
    }

    pub fn ambient(&self) -> &Arc<RootDatum> {
        &self.ambient
    }

    pub fn levi(&self) -> &LeviSet {
        &self.levi
    }

    /// The Levi as a standalone root datum (same lattice, fewer roots).
    pub fn levi_datum(&self) -> &Arc<RootDatum> {
        &self.levi_datum
    }

    pub fn conj_levi(&self) -> &LeviSet {
        &self.conj_levi
    }

    pub fn conj_datum(&self) -> &Arc<RootDatum> {
        &self.conj_datum
    }

    /// Longest element of `^M W`.
    pub fn w0p(&self) -> WeylId {
        self.w0p
    }

    /// Longest element of `W_M`.
    pub fn w0pp(&self) -> WeylId {
        self.w0pp
    }

    /// `^M W` in shortlex order.
    pub fn coset_reps(&self) -> &[WeylId] {
        &self.coset_reps
    }

    /// Minimal-length representatives of `W / W_{M'}`, for the right
    /// freeness decomposition over the conjugate Levi.
    pub fn right_reps(&self) -> &[WeylId] {
        &self.right_reps
    }

    /// The parabolic context of the conjugate Levi.
    pub fn conj_ctx(&self) -> Result<ParabolicCtx> {
        ParabolicCtx::new(&self.ambient, self.conj_levi.clone())
    }

    /// Identity relabeling `H_M -> H` (checked).
    pub fn embed(&self, h: &HeckeElt) -> Result<HeckeElt> {
        if !h.datum().same_datum(&self.levi_datum) {
            return Err(CoreError::DatumMismatch {
                expected: self.levi_datum.name().to_string(),
                found: h.datum().name().to_string(),
            });
        }
        embed_levi(&self.ambient, h)
    }

    /// Inverse of [`embed`](Self::embed) on elements supported on `W_M`.
    pub fn restrict(&self, h: &HeckeElt) -> Result<HeckeElt> {
        restrict_to_levi(&self.levi_datum, h)
    }

    pub fn embed_conj(&self, h: &HeckeElt) -> Result<HeckeElt> {
        if !h.datum().same_datum(&self.conj_datum) {
            return Err(CoreError::DatumMismatch {
                expected: self.conj_datum.name().to_string(),
                found: h.datum().name().to_string(),
            });
        }
        embed_levi(&self.ambient, h)
    }

    fn levi_id(&self, w: WeylId) -> WeylId {
        self.levi_datum
            .lookup_matrix(self.ambient.matrix(w))
            .expect("element of W_M")
    }

    fn conj_id(&self, w: WeylId) -> WeylId {
        self.conj_datum
            .lookup_matrix(self.ambient.matrix(w))
            .expect("element of W_M'")
    }

    /// Left freeness decomposition `h = sum_{w'} omega_{w'} T_{w'}` over the
    /// basis `^M W`, coefficients in `H_M`. Exact term regrouping through
    /// `T_w = T_{w''} T_{w'}`.
    pub fn decompose_left(&self, h: &HeckeElt) -> BTreeMap<WeylId, HeckeElt> {
        let mut parts: BTreeMap<WeylId, Terms> = BTreeMap::new();
        for ((mu, w), c) in h.terms() {
            let (wpp, wp) = self.ambient.pq_decompose(*w, &self.levi);
            parts
                .entry(wp)
                .or_default()
                .insert((mu.clone(), self.levi_id(wpp)), c.clone());
        }
        parts
            .into_iter()
            .map(|(wp, terms)| (wp, HeckeElt::from_terms(&self.levi_datum, terms)))
            .collect()
    }

    pub fn reassemble_left(&self, parts: &BTreeMap<WeylId, HeckeElt>) -> Result<HeckeElt> {
        let mut out = HeckeElt::zero(&self.ambient);
        for (wp, omega) in parts {
            out = out.add(&self.embed(omega)?.mul(&HeckeElt::t(&self.ambient, *wp)));
        }
        Ok(out)
    }

    /// Right freeness decomposition `h = sum_x T_x omega_x` with `x` ranging
    /// over minimal representatives of `W / W_{M'}` and `omega_x` in
    /// `H_{M'}`. Computed by eliminating the term whose coset leader has
    /// maximal length; the leading term of `T_x Theta_nu T_u` is
    /// `Theta_{x nu} T_{xu}` and every other term has a strictly shorter
    /// leader, so the elimination terminates.
    pub fn decompose_right(&self, h: &HeckeElt) -> Result<BTreeMap<WeylId, HeckeElt>> {
        let mut out: BTreeMap<WeylId, Terms> = BTreeMap::new();
        let mut rem = h.clone();
        while !rem.is_zero() {
            // term with the longest coset leader (first in key order on ties)
            let mut best: Option<(Vec<i64>, WeylId, WeylId, WeylId)> = None;
            let mut best_len = 0usize;
            for (mu, w) in rem.terms().keys() {
                let (x, u) = self.ambient.coset_leader_right(*w, &self.conj_levi);
                let l = self.ambient.length(x);
                if best.is_none() || l > best_len {
                    best_len = l;
                    best = Some((mu.clone(), *w, x, u));
                }
            }
            let (mu, w, x, u) = best.unwrap();
            let c = rem.terms().get(&(mu.clone(), w)).unwrap().clone();
            let xinv_mu = self.ambient.act_cochar(self.ambient.winv(x), &mu);
            let mut t = Terms::new();
            t.insert((xinv_mu, self.conj_id(u)), c);
            let omega = HeckeElt::from_terms(&self.conj_datum, t);
            let piece = HeckeElt::t(&self.ambient, x).mul(&self.embed_conj(&omega)?);
            rem = rem.sub(&piece);
            for (k, v) in omega.terms() {
                crate::hecke::add_term_pub(out.entry(x).or_default(), k.clone(), v.clone());
            }
        }
        Ok(out
            .into_iter()
            .map(|(x, terms)| (x, HeckeElt::from_terms(&self.conj_datum, terms)))
            .filter(|(_, e)| !e.is_zero())
            .collect())
    }

    pub fn reassemble_right(&self, parts: &BTreeMap<WeylId, HeckeElt>) -> Result<HeckeElt> {
        let mut out = HeckeElt::zero(&self.ambient);
        for (x, omega) in parts {
            out = out.add(&HeckeElt::t(&self.ambient, *x).mul(&self.embed_conj(omega)?));
        }
        Ok(out)
    }

    /// The opposition of `H_M` computed with the Levi's own data (`w0''`,
    /// Levi twist, Levi modulus). `star_b`/`star_im` already work relative
    /// to the datum of their argument, so this is a support-checked call.
    pub fn levi_star(&self, h: &HeckeElt, kind: StarKind) -> Result<HeckeElt> {
        if !h.datum().same_datum(&self.levi_datum) {
            return Err(CoreError::DatumMismatch {
                expected: self.levi_datum.name().to_string(),
                found: h.datum().name().to_string(),
            });
        }
        Ok(match kind {
            StarKind::B => star_b(h),
            StarKind::Im => star_im(h),
        })
    }

    pub fn conj_star(&self, h: &HeckeElt, kind: StarKind) -> Result<HeckeElt> {
        if !h.datum().same_datum(&self.conj_datum) {
            return Err(CoreError::DatumMismatch {
                expected: self.conj_datum.name().to_string(),
                found: h.datum().name().to_string(),
            });
        }
        Ok(match kind {
            StarKind::B => star_b(h),
            StarKind::Im => star_im(h),
        })
    }

    /// The conjugation isomorphism `gamma: H_{M'} -> H_M`, determined by
    /// `Theta_mu -> Theta_{w0' mu}` and `T_u -> T_{w0' u w0'^{-1}}` on
    /// Bernstein terms.
    pub fn gamma_transport(&self, h: &HeckeElt) -> Result<HeckeElt> {
        if !h.datum().same_datum(&self.conj_datum) {
            return Err(CoreError::DatumMismatch {
                expected: self.conj_datum.name().to_string(),
                found: h.datum().name().to_string(),
            });
        }
        let mut terms = Terms::new();
        let w0p_inv = self.ambient.winv(self.w0p);
        for ((mu, u), c) in h.terms() {
            let amb_u = self
                .ambient
                .lookup_matrix(self.conj_datum.matrix(*u))
                .expect("W_M' element");
            let conj = self
                .ambient
                .wmul(self.ambient.wmul(self.w0p, amb_u), w0p_inv);
            terms.insert(
                (self.ambient.act_cochar(self.w0p, mu), self.levi_id(conj)),
                c.clone(),
            );
        }
        Ok(HeckeElt::from_terms(&self.levi_datum, terms))
    }

    /// Exhaustive check of the length transport `l(w0'^{-1} w'' w0') = l(w'')`
    /// over `W_M`; returns the witnesses that fail (empty on pass).
    pub fn check_length_formula(&self) -> Vec<(WeylId, usize, usize)> {
        let w0p_inv = self.ambient.winv(self.w0p);
        let mut failures = Vec::new();
        for wpp in self.ambient.levi_elements(&self.levi) {
            let conj = self
                .ambient
                .wmul(self.ambient.wmul(w0p_inv, wpp), self.w0p);
            if self.ambient.length(conj) != self.ambient.length(wpp) {
                failures.push((wpp, self.ambient.length(wpp), self.ambient.length(conj)));
            }
        }
        failures
    }

    /// The parabolic opposition identity for `omega` in `H_{M'}`: compares
    /// `star(embed(omega))` against the transported sandwich
    /// `T_{w0'}^{-1} embed(gamma(omega^#)) T_{w0'}` (or its mirror).
    pub fn check_parabolic_opposition(
        &self,
        omega: &HeckeElt,
        kind: StarKind,
        orientation: Orientation,
    ) -> Result<bool> {
        let lhs = match kind {
            StarKind::B => star_b(&self.embed_conj(omega)?),
            StarKind::Im => star_im(&self.embed_conj(omega)?),
        };
        let transported = self.embed(&self.gamma_transport(&self.conj_star(omega, kind)?)?)?;
        let tw = HeckeElt::t(&self.ambient, self.w0p);
        let tw_inv = t_inv(&self.ambient, self.w0p);
        let rhs = match orientation {
            Orientation::AsWritten => tw_inv.mul(&transported).mul(&tw),
            Orientation::Mirrored => tw.mul(&transported).mul(&tw_inv),
        };
        Ok(lhs == rhs)
    }
}
