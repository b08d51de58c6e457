//! Root-datum arithmetic and Weyl group combinatorics.
//!
//! A [`RootDatum`] models a split reductive group combinatorially: the
//! character and cocharacter lattices are both `Z^rank` with the dot pairing,
//! simple roots live in `X^*`, simple coroots in `X_*`. The finite Weyl group
//! is enumerated once (as matrices acting on `X_*`) and elements are handled
//! by table index; the canonical form of an element is its shortlex-least
//! reduced word. The extended affine Weyl group is the semidirect product
//! `X_* x| W` with elements written `pi^mu w`.

use crate::error::{CoreError, Result};
use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

/// Index of a finite Weyl group element in its datum's table.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct WeylId(pub u32);

/// Element `pi^mu w` of the extended affine Weyl group.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ExtElt {
    pub mu: Vec<i64>,
    pub w: WeylId,
}

impl ExtElt {
    pub fn translation(mu: Vec<i64>) -> Self {
        Self { mu, w: WeylId(0) }
    }

    pub fn finite(w: WeylId, rank: usize) -> Self {
        Self { mu: vec![0; rank], w }
    }

    pub fn is_identity(&self) -> bool {
        self.w == WeylId(0) && self.mu.iter().all(|&x| x == 0)
    }
}

/// Subset of simple-root indices (0-based, sorted, deduplicated).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct LeviSet(Vec<usize>);

impl LeviSet {
    pub fn new(mut indices: Vec<usize>, num_simple: usize) -> Result<Self> {
        indices.sort_unstable();
        indices.dedup();
        if let Some(&bad) = indices.iter().find(|&&i| i >= num_simple) {
            return Err(CoreError::Parse(format!(
                "Levi index {} out of range (datum has {} simple roots)",
                bad + 1,
                num_simple
            )));
        }
        Ok(Self(indices))
    }

    pub fn full(num_simple: usize) -> Self {
        Self((0..num_simple).collect())
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for LeviSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|i| (i + 1).to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// Square integer matrix, row-major.
type Mat = Vec<i64>;

fn mat_identity(n: usize) -> Mat {
    let mut m = vec![0; n * n];
    for i in 0..n {
        m[i * n + i] = 1;
    }
    m
}

fn mat_mul(n: usize, a: &[i64], b: &[i64]) -> Mat {
    let mut out = vec![0; n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            if aik == 0 {
                continue;
            }
            for j in 0..n {
                out[i * n + j] += aik * b[k * n + j];
            }
        }
    }
    out
}

fn mat_apply(n: usize, m: &[i64], v: &[i64]) -> Vec<i64> {
    (0..n)
        .map(|i| (0..n).map(|j| m[i * n + j] * v[j]).sum())
        .collect()
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

struct WeylInfo {
    word: Vec<usize>,
    mat: Mat,      // action on X_*
    mat_dual: Mat, // action on X^*
    length: usize,
    inv: WeylId,
}

/// One positive root together with its coroot and its coefficients over the
/// simple roots (all nonnegative).
#[derive(Clone, Debug)]
pub struct PosRoot {
    pub root: Vec<i64>,
    pub coroot: Vec<i64>,
    pub coeffs: Vec<i64>,
}

impl PosRoot {
    /// Support as simple-root indices.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, _)| i)
    }
}

/// Irreducible component of the Coxeter diagram, with its highest root and
/// the corresponding reflection (used for affine simple reflections).
#[derive(Clone, Debug)]
pub struct Component {
    pub indices: Vec<usize>,
    pub highest_root: Vec<i64>,
    pub highest_coroot: Vec<i64>,
    pub reflection: WeylId,
}

const MAX_GROUP: usize = 200_000;
const MAX_ROOTS: usize = 20_000;

pub struct RootDatum {
    name: String,
    rank: usize,
    simple_roots: Vec<Vec<i64>>,
    simple_coroots: Vec<Vec<i64>>,
    pos_roots: Vec<PosRoot>,
    pos_root_set: HashSet<Vec<i64>>,
    two_rho_full: Vec<i64>,
    witness: Vec<i64>,
    components: Vec<Component>,
    elems: Vec<WeylInfo>,
    right: Vec<Vec<WeylId>>,
    left: Vec<Vec<WeylId>>,
    index: HashMap<Mat, WeylId>,
    pub(crate) hecke_caches: crate::hecke::Caches,
}

impl fmt::Debug for RootDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RootDatum({}, |W|={})", self.name, self.elems.len())
    }
}

impl RootDatum {
    pub fn new(
        name: impl Into<String>,
        rank: usize,
        simple_roots: Vec<Vec<i64>>,
        simple_coroots: Vec<Vec<i64>>,
    ) -> Result<Arc<Self>> {
        let name = name.into();
        let n_simple = simple_roots.len();
        if simple_coroots.len() != n_simple {
            return Err(CoreError::InvalidDatum(
                "simple_roots and simple_coroots must have the same length".into(),
            ));
        }
        if rank == 0 && n_simple > 0 {
            return Err(CoreError::InvalidDatum("rank 0 datum with roots".into()));
        }
        for v in simple_roots.iter().chain(simple_coroots.iter()) {
            if v.len() != rank {
                return Err(CoreError::InvalidDatum(format!(
                    "vector {:?} does not have rank {}",
                    v, rank
                )));
            }
        }
        // Cartan conditions.
        for i in 0..n_simple {
            for j in 0..n_simple {
                let a = dot(&simple_roots[i], &simple_coroots[j]);
                if i == j && a != 2 {
                    return Err(CoreError::InvalidDatum(format!(
                        "<alpha_{}, alphacheck_{}> = {} (must be 2)",
                        i + 1,
                        i + 1,
                        a
                    )));
                }
                if i != j && a > 0 {
                    return Err(CoreError::InvalidDatum(format!(
                        "<alpha_{}, alphacheck_{}> = {} (must be <= 0)",
                        i + 1,
                        j + 1,
                        a
                    )));
                }
                if i != j {
                    let b = dot(&simple_roots[j], &simple_coroots[i]);
                    if (a == 0) != (b == 0) {
                        return Err(CoreError::InvalidDatum(format!(
                            "Cartan entries ({},{}) and ({},{}) must vanish together",
                            i + 1,
                            j + 1,
                            j + 1,
                            i + 1
                        )));
                    }
                }
            }
        }
        // Simple roots and simple coroots must each be linearly independent.
        for (label, vecs) in [("roots", &simple_roots), ("coroots", &simple_coroots)] {
            let m: Vec<Vec<num::BigRational>> = vecs
                .iter()
                .map(|v| {
                    v.iter()
                        .map(|&x| num::BigRational::from_integer(x.into()))
                        .collect()
                })
                .collect();
            if crate::matrix::rational_rank(&m) != n_simple {
                return Err(CoreError::InvalidDatum(format!(
                    "simple {} are linearly dependent",
                    label
                )));
            }
        }

        // Reflection matrices.
        let refl: Vec<Mat> = (0..n_simple)
            .map(|i| {
                let mut m = mat_identity(rank);
                for r in 0..rank {
                    for c in 0..rank {
                        m[r * rank + c] -= simple_coroots[i][r] * simple_roots[i][c];
                    }
                }
                m
            })
            .collect();
        let refl_dual: Vec<Mat> = (0..n_simple)
            .map(|i| {
                let mut m = mat_identity(rank);
                for r in 0..rank {
                    for c in 0..rank {
                        m[r * rank + c] -= simple_roots[i][r] * simple_coroots[i][c];
                    }
                }
                m
            })
            .collect();

        // Enumerate W by shortlex BFS; the first word reaching a matrix is its
        // canonical reduced word.
        let mut elems: Vec<WeylInfo> = vec![WeylInfo {
            word: vec![],
            mat: mat_identity(rank),
            mat_dual: mat_identity(rank),
            length: 0,
            inv: WeylId(0),
        }];
        let mut index: HashMap<Mat, WeylId> = HashMap::new();
        index.insert(elems[0].mat.clone(), WeylId(0));
        let mut queue: VecDeque<u32> = VecDeque::from([0]);
        while let Some(cur) = queue.pop_front() {
            for j in 0..n_simple {
                let mat = mat_mul(rank, &elems[cur as usize].mat, &refl[j]);
                if index.contains_key(&mat) {
                    continue;
                }
                if elems.len() >= MAX_GROUP {
                    return Err(CoreError::NotFiniteType(format!(
                        "Weyl group of `{}` exceeds {} elements",
                        name, MAX_GROUP
                    )));
                }
                let mat_dual = mat_mul(rank, &elems[cur as usize].mat_dual, &refl_dual[j]);
                let mut word = elems[cur as usize].word.clone();
                word.push(j);
                let id = WeylId(elems.len() as u32);
                index.insert(mat.clone(), id);
                elems.push(WeylInfo {
                    length: word.len(),
                    word,
                    mat,
                    mat_dual,
                    inv: WeylId(0),
                });
                queue.push_back(id.0);
            }
        }
        // Product tables and inverses.
        let nw = elems.len();
        let mut right = vec![Vec::with_capacity(n_simple); nw];
        let mut left = vec![Vec::with_capacity(n_simple); nw];
        for w in 0..nw {
            for j in 0..n_simple {
                right[w].push(index[&mat_mul(rank, &elems[w].mat, &refl[j])]);
                left[w].push(index[&mat_mul(rank, &refl[j], &elems[w].mat)]);
            }
        }
        for w in 0..nw {
            let mut inv = WeylId(0);
            for &j in elems[w].word.iter().rev() {
                inv = right[inv.0 as usize][j];
            }
            elems[w].inv = inv;
        }

        // Positive roots by closure: s_i permutes the positive roots other
        // than alpha_i, so the orbit stays positive; coefficients over the
        // simple roots come along for free.
        let mut pos_map: HashMap<Vec<i64>, (Vec<i64>, Vec<i64>)> = HashMap::new();
        for i in 0..n_simple {
            let mut coeffs = vec![0; n_simple];
            coeffs[i] = 1;
            pos_map.insert(simple_roots[i].clone(), (simple_coroots[i].clone(), coeffs));
        }
        let mut frontier: Vec<Vec<i64>> = simple_roots.clone();
        while let Some(beta) = frontier.pop() {
            let (beta_check, coeffs) = pos_map[&beta].clone();
            for i in 0..n_simple {
                if beta == simple_roots[i] {
                    continue;
                }
                let p = dot(&beta, &simple_coroots[i]);
                let new_root: Vec<i64> = beta
                    .iter()
                    .zip(&simple_roots[i])
                    .map(|(b, a)| b - p * a)
                    .collect();
                if pos_map.contains_key(&new_root) {
                    continue;
                }
                if pos_map.len() >= MAX_ROOTS {
                    return Err(CoreError::NotFiniteType(format!(
                        "root system of `{}` exceeds {} roots",
                        name, MAX_ROOTS
                    )));
                }
                let pc = dot(&simple_roots[i], &beta_check);
                let new_coroot: Vec<i64> = beta_check
                    .iter()
                    .zip(&simple_coroots[i])
                    .map(|(b, a)| b - pc * a)
                    .collect();
                let mut new_coeffs = coeffs.clone();
                new_coeffs[i] -= p;
                debug_assert!(new_coeffs.iter().all(|&c| c >= 0));
                pos_map.insert(new_root.clone(), (new_coroot, new_coeffs));
                frontier.push(new_root);
            }
        }
        let mut pos_roots: Vec<PosRoot> = pos_map
            .into_iter()
            .map(|(root, (coroot, coeffs))| PosRoot { root, coroot, coeffs })
            .collect();
        pos_roots.sort_by(|a, b| {
            let ha: i64 = a.coeffs.iter().sum();
            let hb: i64 = b.coeffs.iter().sum();
            (ha, &a.root).cmp(&(hb, &b.root))
        });
        let pos_root_set: HashSet<Vec<i64>> =
            pos_roots.iter().map(|r| r.root.clone()).collect();
        // The full root system is the union of the positive roots and their
        // negatives; check it is W-stable and negation-closed.
        for r in &pos_roots {
            let neg: Vec<i64> = r.root.iter().map(|x| -x).collect();
            if pos_root_set.contains(&neg) {
                return Err(CoreError::InvalidDatum(format!(
                    "root {:?} and its negative are both positive",
                    r.root
                )));
            }
        }

        let two_rho_full: Vec<i64> = (0..rank)
            .map(|c| pos_roots.iter().map(|r| r.root[c]).sum())
            .collect();

        // Coxeter-diagram components and their highest roots.
        let components = {
            let mut seen = vec![false; n_simple];
            let mut comps = Vec::new();
            for start in 0..n_simple {
                if seen[start] {
                    continue;
                }
                let mut stack = vec![start];
                let mut indices = Vec::new();
                seen[start] = true;
                while let Some(i) = stack.pop() {
                    indices.push(i);
                    for j in 0..n_simple {
                        if !seen[j]
                            && (dot(&simple_roots[i], &simple_coroots[j]) != 0
                                || dot(&simple_roots[j], &simple_coroots[i]) != 0)
                        {
                            seen[j] = true;
                            stack.push(j);
                        }
                    }
                }
                indices.sort_unstable();
                let in_comp = |r: &PosRoot| r.support().all(|i| indices.contains(&i));
                let highest = pos_roots
                    .iter()
                    .filter(|r| in_comp(r))
                    .max_by_key(|r| r.coeffs.iter().sum::<i64>())
                    .expect("component has roots");
                // reflection about the highest root
                let mut m = mat_identity(rank);
                for r in 0..rank {
                    for c in 0..rank {
                        m[r * rank + c] -= highest.coroot[r] * highest.root[c];
                    }
                }
                let reflection = *index.get(&m).ok_or_else(|| {
                    CoreError::InvalidDatum("highest-root reflection not in W".into())
                })?;
                comps.push(Component {
                    indices,
                    highest_root: highest.root.clone(),
                    highest_coroot: highest.coroot.clone(),
                    reflection,
                });
            }
            comps
        };

        let witness = strict_dominance_witness(rank, &simple_roots, &simple_coroots)?;

        Ok(Arc::new(Self {
            name,
            rank,
            simple_roots,
            simple_coroots,
            pos_roots,
            pos_root_set,
            two_rho_full,
            witness,
            components,
            elems,
            right,
            left,
            index,
            hecke_caches: Default::default(),
        }))
    }

    /// Named presets (`A1`, `GL2`, `A2`, `GL3`, `B2`, `G2`) and direct sums of
    /// them joined by `+` or `x`, e.g. `A1xA1`.
    pub fn preset(name: &str) -> Result<Arc<Self>> {
        let parts: Vec<&str> = name
            .split(|c| c == '+' || c == 'x' || c == 'X')
            .map(str::trim)
            .collect();
        if parts.iter().any(|p| p.is_empty()) {
            return Err(CoreError::UnknownPreset(name.to_string()));
        }
        let mut atoms = Vec::new();
        for p in &parts {
            atoms.push(preset_atom(p).ok_or_else(|| CoreError::UnknownPreset(p.to_string()))?);
        }
        if atoms.len() == 1 {
            let (roots, coroots) = atoms.pop().unwrap();
            let rank = roots[0].len();
            return Self::new(parts[0], rank, roots, coroots);
        }
        // direct sum: block-diagonal lattices
        let total_rank: usize = atoms.iter().map(|(r, _)| r[0].len()).sum();
        let mut roots = Vec::new();
        let mut coroots = Vec::new();
        let mut offset = 0;
        for (ar, ac) in &atoms {
            let part_rank = ar[0].len();
            for v in ar {
                let mut big = vec![0; total_rank];
                big[offset..offset + part_rank].copy_from_slice(v);
                roots.push(big);
            }
            for v in ac {
                let mut big = vec![0; total_rank];
                big[offset..offset + part_rank].copy_from_slice(v);
                coroots.push(big);
            }
            offset += part_rank;
        }
        let canonical: Vec<String> = parts.iter().map(|s| s.to_string()).collect();
        Self::new(canonical.join("x"), total_rank, roots, coroots)
    }

    pub fn preset_names() -> &'static [&'static str] {
        &["A1", "GL2", "A2", "GL3", "B2", "G2"]
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn num_simple(&self) -> usize {
        self.simple_roots.len()
    }

    pub fn simple_root(&self, i: usize) -> &[i64] {
        &self.simple_roots[i]
    }

    pub fn simple_coroot(&self, i: usize) -> &[i64] {
        &self.simple_coroots[i]
    }

    /// The bilinear pairing `X^* x X_* -> Z` (dot product in this model).
    pub fn pairing(&self, chi: &[i64], mu: &[i64]) -> i64 {
        dot(chi, mu)
    }

    pub fn pos_roots(&self) -> &[PosRoot] {
        &self.pos_roots
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    /// Stored strictly dominant cocharacter (`<alpha_i, nu> >= 1` for all i).
    pub fn witness(&self) -> &[i64] {
        &self.witness
    }

    // ---- finite Weyl group ----------------------------------------------

    pub fn weyl_order(&self) -> usize {
        self.elems.len()
    }

    pub fn identity(&self) -> WeylId {
        WeylId(0)
    }

    pub fn simple_refl(&self, i: usize) -> WeylId {
        self.right[0][i]
    }

    pub fn all_elements(&self) -> impl Iterator<Item = WeylId> {
        (0..self.elems.len() as u32).map(WeylId)
    }

    pub fn word(&self, w: WeylId) -> &[usize] {
        &self.elems[w.0 as usize].word
    }

    pub fn length(&self, w: WeylId) -> usize {
        self.elems[w.0 as usize].length
    }

    pub fn from_word(&self, word: &[usize]) -> Result<WeylId> {
        let mut w = WeylId(0);
        for &i in word {
            if i >= self.num_simple() {
                return Err(CoreError::Parse(format!(
                    "simple reflection index {} out of range",
                    i + 1
                )));
            }
            w = self.right[w.0 as usize][i];
        }
        Ok(w)
    }

    pub fn right_mul(&self, w: WeylId, i: usize) -> WeylId {
        self.right[w.0 as usize][i]
    }

    pub fn left_mul(&self, i: usize, w: WeylId) -> WeylId {
        self.left[w.0 as usize][i]
    }

    pub fn wmul(&self, a: WeylId, b: WeylId) -> WeylId {
        let mut w = a;
        for &i in self.word(b) {
            w = self.right[w.0 as usize][i];
        }
        w
    }

    pub fn winv(&self, w: WeylId) -> WeylId {
        self.elems[w.0 as usize].inv
    }

    pub(crate) fn lookup_matrix(&self, mat: &[i64]) -> Option<WeylId> {
        self.index.get(mat).copied()
    }

    pub(crate) fn matrix(&self, w: WeylId) -> &[i64] {
        &self.elems[w.0 as usize].mat
    }

    /// Left action of `w` on a cocharacter.
    pub fn act_cochar(&self, w: WeylId, mu: &[i64]) -> Vec<i64> {
        mat_apply(self.rank, &self.elems[w.0 as usize].mat, mu)
    }

    /// Left action of `w` on a character (the dual action).
    pub fn act_char(&self, w: WeylId, chi: &[i64]) -> Vec<i64> {
        mat_apply(self.rank, &self.elems[w.0 as usize].mat_dual, chi)
    }

    /// Longest element of the standard parabolic subgroup `W_L`.
    pub fn longest_element(&self, levi: &LeviSet) -> WeylId {
        let mut w = WeylId(0);
        loop {
            let next = levi
                .indices()
                .iter()
                .map(|&i| self.right[w.0 as usize][i])
                .find(|&u| self.length(u) > self.length(w));
            match next {
                Some(u) => w = u,
                None => return w,
            }
        }
    }

    pub fn w0(&self) -> WeylId {
        self.longest_element(&LeviSet::full(self.num_simple()))
    }

    /// Elements of `W_L`, in table (shortlex) order. Every reduced word of an
    /// element of a standard parabolic uses only letters from it, so the
    /// canonical word decides membership.
    pub fn levi_elements(&self, levi: &LeviSet) -> Vec<WeylId> {
        self.all_elements()
            .filter(|&w| self.word(w).iter().all(|&i| levi.contains(i)))
            .collect()
    }

    /// Minimal-length representatives of the cosets `W_L \ W`, in shortlex
    /// order (length, then lexicographic canonical word). Characterized by
    /// having no left descent in `L`.
    pub fn min_coset_reps(&self, levi: &LeviSet) -> Vec<WeylId> {
        self.all_elements()
            .filter(|&w| {
                levi.indices()
                    .iter()
                    .all(|&i| self.length(self.left[w.0 as usize][i]) > self.length(w))
            })
            .collect()
    }

    /// Unique factorization `w = w'' * w'` with `w'' in W_L`, `w'` a minimal
    /// coset representative, and `l(w) = l(w'') + l(w')`.
    pub fn pq_decompose(&self, w: WeylId, levi: &LeviSet) -> (WeylId, WeylId) {
        let mut rest = w;
        let mut wpp = WeylId(0);
        loop {
            let desc = levi
                .indices()
                .iter()
                .copied()
                .find(|&i| self.length(self.left[rest.0 as usize][i]) < self.length(rest));
            match desc {
                Some(i) => {
                    rest = self.left[rest.0 as usize][i];
                    wpp = self.right[wpp.0 as usize][i];
                }
                None => break,
            }
        }
        debug_assert_eq!(self.length(w), self.length(wpp) + self.length(rest));
        (wpp, rest)
    }

    /// Minimal representative of the coset `w W_L` together with the Levi
    /// factor: `w = x * u`, `u in W_L`, `l(w) = l(x) + l(u)`.
    pub fn coset_leader_right(&self, w: WeylId, levi: &LeviSet) -> (WeylId, WeylId) {
        let mut rest = w;
        let mut u = WeylId(0);
        loop {
            let desc = levi
                .indices()
                .iter()
                .copied()
                .find(|&i| self.length(self.right[rest.0 as usize][i]) < self.length(rest));
            match desc {
                Some(i) => {
                    rest = self.right[rest.0 as usize][i];
                    u = self.left[u.0 as usize][i];
                }
                None => break,
            }
        }
        debug_assert_eq!(self.length(w), self.length(rest) + self.length(u));
        (rest, u)
    }

    /// The conjugate Levi `L' = w0'^{-1}(L)` together with `w0'`, the longest
    /// minimal coset representative.
    pub fn conjugate_levi(&self, levi: &LeviSet) -> Result<(LeviSet, WeylId)> {
        let reps = self.min_coset_reps(levi);
        let w0p = *reps.last().expect("nonempty");
        debug_assert!(reps.iter().all(|&r| self.length(r) <= self.length(w0p)));
        let w0p_inv = self.winv(w0p);
        let mut conj = Vec::with_capacity(levi.len());
        for &i in levi.indices() {
            let img = self.act_char(w0p_inv, &self.simple_roots[i]);
            let j = (0..self.num_simple())
                .find(|&j| self.simple_roots[j] == img)
                .ok_or_else(|| {
                    CoreError::InvalidDatum(format!(
                        "w0'^-1(alpha_{}) is not a simple root (bug)",
                        i + 1
                    ))
                })?;
            if self.act_cochar(w0p_inv, &self.simple_coroots[i]) != self.simple_coroots[j] {
                return Err(CoreError::InvalidDatum(
                    "coroot image mismatch in conjugate Levi (bug)".into(),
                ));
            }
            conj.push(j);
        }
        Ok((LeviSet::new(conj, self.num_simple())?, w0p))
    }

    /// Order of `s_i s_j` (the braid exponent `m_ij`).
    pub fn braid_order(&self, i: usize, j: usize) -> usize {
        let g = self.wmul(self.simple_refl(i), self.simple_refl(j));
        let mut w = g;
        let mut m = 1;
        while w != WeylId(0) {
            w = self.wmul(w, g);
            m += 1;
        }
        m
    }

    /// All reduced words of `w` (first letters range over left descents).
    pub fn all_reduced_words(&self, w: WeylId) -> Vec<Vec<usize>> {
        if w == WeylId(0) {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for i in 0..self.num_simple() {
            let u = self.left[w.0 as usize][i];
            if self.length(u) < self.length(w) {
                for mut rest in self.all_reduced_words(u) {
                    rest.insert(0, i);
                    out.push(rest);
                }
            }
        }
        out
    }

    // ---- dominance --------------------------------------------------------

    pub fn is_dominant(&self, mu: &[i64]) -> bool {
        self.simple_roots.iter().all(|a| dot(a, mu) >= 0)
    }

    pub fn is_antidominant(&self, mu: &[i64]) -> bool {
        self.simple_roots.iter().all(|a| dot(a, mu) <= 0)
    }

    pub fn is_strictly_dominant(&self, mu: &[i64]) -> bool {
        self.simple_roots.iter().all(|a| dot(a, mu) >= 1)
    }

    /// Canonical `mu = mu_plus - mu_minus` with both parts dominant:
    /// `mu_minus = k * witness` for the minimal natural `k` making
    /// `mu + k * witness` dominant.
    pub fn dominant_decomposition(&self, mu: &[i64]) -> (Vec<i64>, Vec<i64>) {
        let mut k: i64 = 0;
        for a in &self.simple_roots {
            let p = dot(a, mu);
            if p < 0 {
                let wv = dot(a, &self.witness);
                debug_assert!(wv >= 1);
                // smallest k with p + k*wv >= 0
                k = k.max((-p + wv - 1) / wv);
            }
        }
        let mu_minus: Vec<i64> = self.witness.iter().map(|x| x * k).collect();
        let mu_plus: Vec<i64> = mu.iter().zip(&mu_minus).map(|(a, b)| a + b).collect();
        debug_assert!(self.is_dominant(&mu_plus) && self.is_dominant(&mu_minus));
        (mu_plus, mu_minus)
    }

    /// Sum of the positive roots supported on the Levi subset (`2 rho` of the
    /// Levi; the full set gives `2 rho` of the group).
    pub fn two_rho(&self, levi: &LeviSet) -> Vec<i64> {
        let mut out = vec![0; self.rank];
        for r in &self.pos_roots {
            if r.support().all(|i| levi.contains(i)) {
                for (o, x) in out.iter_mut().zip(&r.root) {
                    *o += x;
                }
            }
        }
        out
    }

    pub fn two_rho_full(&self) -> &[i64] {
        &self.two_rho_full
    }

    // ---- extended affine Weyl group ---------------------------------------

    pub fn ext_identity(&self) -> ExtElt {
        ExtElt { mu: vec![0; self.rank], w: WeylId(0) }
    }

    /// `(mu, w)(nu, u) = (mu + w nu, w u)`.
    pub fn ext_mul(&self, x: &ExtElt, y: &ExtElt) -> ExtElt {
        let wnu = self.act_cochar(x.w, &y.mu);
        ExtElt {
            mu: x.mu.iter().zip(&wnu).map(|(a, b)| a + b).collect(),
            w: self.wmul(x.w, y.w),
        }
    }

    pub fn ext_inv(&self, x: &ExtElt) -> ExtElt {
        let winv = self.winv(x.w);
        let m = self.act_cochar(winv, &x.mu);
        ExtElt { mu: m.into_iter().map(|a| -a).collect(), w: winv }
    }

    /// Iwahori-Matsumoto length:
    /// `l(pi^mu w) = sum_{a>0, w^{-1}a>0} |<a,mu>| + sum_{a>0, w^{-1}a<0} |<a,mu>-1|`.
    pub fn ext_length(&self, x: &ExtElt) -> usize {
        let winv = self.winv(x.w);
        let mut total: i64 = 0;
        for r in &self.pos_roots {
            let img = self.act_char(winv, &r.root);
            let p = dot(&r.root, &x.mu);
            if self.pos_root_set.contains(&img) {
                total += p.abs();
            } else {
                debug_assert!(self
                    .pos_root_set
                    .contains(&img.iter().map(|v| -v).collect::<Vec<_>>()));
                total += (p - 1).abs();
            }
        }
        total as usize
    }

    /// Sub-datum spanned by a Levi subset: same lattices, fewer simple roots.
    pub fn levi_datum(&self, levi: &LeviSet) -> Result<Arc<RootDatum>> {
        let labels: Vec<String> = levi.indices().iter().map(|i| (i + 1).to_string()).collect();
        RootDatum::new(
            format!("{}[L{}]", self.name, labels.join(",")),
            self.rank,
            levi.indices().iter().map(|&i| self.simple_roots[i].clone()).collect(),
            levi.indices().iter().map(|&i| self.simple_coroots[i].clone()).collect(),
        )
    }

    pub fn same_datum(&self, other: &RootDatum) -> bool {
        std::ptr::eq(self, other)
            || (self.name == other.name
                && self.simple_roots == other.simple_roots
                && self.simple_coroots == other.simple_coroots)
    }
}

fn preset_atom(name: &str) -> Option<(Vec<Vec<i64>>, Vec<Vec<i64>>)> {
    let gl = |n: usize| -> (Vec<Vec<i64>>, Vec<Vec<i64>>) {
        let mut roots = Vec::new();
        for i in 0..n - 1 {
            let mut v = vec![0i64; n];
            v[i] = 1;
            v[i + 1] = -1;
            roots.push(v);
        }
        (roots.clone(), roots)
    };
    match name {
        // SL2: X^* = X_* = Z, alpha = 2, alphacheck = 1
        "A1" => Some((vec![vec![2]], vec![vec![1]])),
        "GL2" => Some(gl(2)),
        "GL3" => Some(gl(3)),
        // adjoint-type realizations: coroots are the coordinate basis
        "A2" => Some((
            vec![vec![2, -1], vec![-1, 2]],
            vec![vec![1, 0], vec![0, 1]],
        )),
        "B2" => Some((
            vec![vec![1, -1], vec![0, 1]],
            vec![vec![1, -1], vec![0, 2]],
        )),
        "G2" => Some((
            vec![vec![2, -3], vec![-1, 2]],
            vec![vec![1, 0], vec![0, 1]],
        )),
        _ => None,
    }
}

/// Find a strictly dominant integral cocharacter. A bounded box search keeps
/// the witness small and canonical (minimal sup-norm, then minimal 1-norm,
/// then lexicographically greatest); very large ranks fall back to a scaled
/// rational solution of `<alpha_i, nu> = const`.
fn strict_dominance_witness(
    rank: usize,
    simple_roots: &[Vec<i64>],
    _simple_coroots: &[Vec<i64>],
) -> Result<Vec<i64>> {
    if simple_roots.is_empty() {
        return Ok(vec![0; rank]);
    }
    let valid = |nu: &[i64]| simple_roots.iter().all(|a| dot(a, nu) >= 1);
    let budget = 2_000_000usize;
    let mut spent = 0usize;
    for r in 1..=8i64 {
        let mut best: Option<Vec<i64>> = None;
        let mut best_l1 = i64::MAX;
        let side = (2 * r + 1) as usize;
        let total = side.pow(rank as u32);
        spent += total;
        if spent > budget {
            break;
        }
        for idx in 0..total {
            let mut nu = vec![0i64; rank];
            let mut rem = idx;
            for c in nu.iter_mut() {
                *c = (rem % side) as i64 - r;
                rem /= side;
            }
            if !valid(&nu) {
                continue;
            }
            let l1: i64 = nu.iter().map(|x| x.abs()).sum();
            let better = match (&best, l1.cmp(&best_l1)) {
                (None, _) => true,
                (_, std::cmp::Ordering::Less) => true,
                (Some(b), std::cmp::Ordering::Equal) => nu > *b,
                _ => false,
            };
            if better {
                best_l1 = l1;
                best = Some(nu);
            }
        }
        if let Some(b) = best {
            return Ok(b);
        }
    }
    // Fallback: nu = m * A^T (A A^T)^{-1} 1 over the rationals, scaled integral.
    use num::{BigRational, Zero};
    let n = simple_roots.len();
    let big = |x: i64| BigRational::from_integer(x.into());
    // gram[i][j] = <alpha_i, alpha_j> as vectors (dot), used to solve A A^T y = 1
    let mut aug: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> =
                (0..n).map(|j| big(dot(&simple_roots[i], &simple_roots[j]))).collect();
            row.extend((0..n).map(|j| if i == j { big(1) } else { big(0) }));
            row
        })
        .collect();
    // invert the Gram matrix (positive definite since the roots are independent)
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !aug[r][col].is_zero())
            .ok_or_else(|| CoreError::InvalidDatum("singular Gram matrix".into()))?;
        aug.swap(col, pivot);
        let p = aug[col][col].clone().recip();
        for x in aug[col].iter_mut() {
            *x *= &p;
        }
        for r in 0..n {
            if r == col || aug[r][col].is_zero() {
                continue;
            }
            let f = aug[r][col].clone();
            for j in 0..2 * n {
                let t = &f * &aug[col][j];
                aug[r][j] -= t;
            }
        }
    }
    let y: Vec<BigRational> = (0..n)
        .map(|i| (0..n).map(|j| aug[i][n + j].clone()).fold(BigRational::zero(), |a, b| a + b))
        .collect();
    let nu_rat: Vec<BigRational> = (0..rank)
        .map(|c| {
            (0..n)
                .map(|i| &y[i] * big(simple_roots[i][c]))
                .fold(BigRational::zero(), |a, b| a + b)
        })
        .collect();
    let mut denom_lcm = num::BigInt::from(1);
    for x in &nu_rat {
        denom_lcm = num::Integer::lcm(&denom_lcm, x.denom());
    }
    let nu: Vec<i64> = nu_rat
        .iter()
        .map(|x| {
            let v = x * BigRational::from_integer(denom_lcm.clone());
            use num::ToPrimitive;
            v.to_integer().to_i64().expect("witness overflow")
        })
        .collect();
    if !valid(&nu) {
        return Err(CoreError::InvalidDatum(
            "failed to construct a strictly dominant witness".into(),
        ));
    }
    Ok(nu)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(name: &str) -> Arc<RootDatum> {
        RootDatum::preset(name).unwrap()
    }

    #[test]
    fn preset_cartan_entries() {
        let gl2 = d("GL2");
        assert_eq!(gl2.simple_root(0), &[1, -1]);
        assert_eq!(gl2.simple_coroot(0), &[1, -1]);
        assert_eq!(gl2.pairing(gl2.simple_root(0), gl2.simple_coroot(0)), 2);
        let a1 = d("A1");
        assert_eq!(a1.pairing(a1.simple_root(0), a1.simple_coroot(0)), 2);
        assert_eq!(a1.pairing(&[2], &[3]), 6);
        assert_eq!(gl2.pairing(&[1, -1], &[1, 0]), 1);
    }

    #[test]
    fn g2_orbit_counts() {
        let g2 = d("G2");
        assert_eq!(g2.pos_roots().len(), 6);
        assert_eq!(g2.weyl_order(), 12);
        assert_eq!(g2.components().len(), 1);
    }

    #[test]
    fn preset_group_orders() {
        for (name, order, npos) in [
            ("A1", 2, 1),
            ("GL2", 2, 1),
            ("A2", 6, 3),
            ("GL3", 6, 3),
            ("B2", 8, 4),
            ("G2", 12, 6),
            ("A1xA1", 4, 2),
            ("A1+G2", 24, 7),
        ] {
            let rd = d(name);
            assert_eq!(rd.weyl_order(), order, "{}", name);
            assert_eq!(rd.pos_roots().len(), npos, "{}", name);
        }
    }

    #[test]
    fn weyl_action_examples() {
        let a1 = d("A1");
        let s = a1.simple_refl(0);
        assert_eq!(a1.act_cochar(s, &[1]), vec![-1]); // s(acheck) = -acheck
        let gl2 = d("GL2");
        let s = gl2.simple_refl(0);
        assert_eq!(gl2.act_cochar(s, &[1, 0]), vec![0, 1]);
        assert_eq!(gl2.act_cochar(gl2.identity(), &[5, 7]), vec![5, 7]);
    }

    #[test]
    fn canonical_words_and_longest_elements() {
        let a2 = d("A2");
        let w0 = a2.w0();
        assert_eq!(a2.word(w0), &[0, 1, 0]); // s1 s2 s1, shortlex-least
        assert_eq!(a2.length(w0), 3);
        let l1 = LeviSet::new(vec![0], 2).unwrap();
        assert_eq!(a2.longest_element(&l1), a2.simple_refl(0));
        let a1 = d("A1");
        assert_eq!(a1.w0(), a1.simple_refl(0));
    }

    #[test]
    fn dominance_and_decomposition() {
        let gl2 = d("GL2");
        assert!(gl2.is_dominant(&[1, 0]));
        assert!(gl2.is_dominant(&[1, 1]));
        assert!(!gl2.is_dominant(&[0, 1]));
        // witness (1,0): minimal box solution, lexicographically greatest tie-break
        assert_eq!(gl2.witness(), &[1, 0]);
        let (p, m) = gl2.dominant_decomposition(&[0, 1]);
        assert_eq!(p, vec![1, 1]);
        assert_eq!(m, vec![1, 0]);
        // decomposition of an already dominant vector is trivial
        let (p, m) = gl2.dominant_decomposition(&[2, 1]);
        assert_eq!(p, vec![2, 1]);
        assert_eq!(m, vec![0, 0]);
    }

    #[test]
    fn witnesses_are_strictly_dominant() {
        for name in ["A1", "GL2", "A2", "GL3", "B2", "G2", "A1xA1", "GL2+B2"] {
            let rd = d(name);
            assert!(rd.is_strictly_dominant(rd.witness()), "{}", name);
        }
    }

    #[test]
    fn two_rho_examples() {
        let gl2 = d("GL2");
        assert_eq!(gl2.two_rho_full(), &[1, -1]);
        let gl3 = d("GL3");
        assert_eq!(gl3.two_rho_full(), &[2, 0, -2]);
        let a2 = d("A2");
        let l1 = LeviSet::new(vec![0], 2).unwrap();
        assert_eq!(a2.two_rho(&l1), a2.simple_root(0).to_vec());
        assert_eq!(a2.two_rho(&LeviSet::empty()), vec![0, 0]);
    }

    #[test]
    fn ext_group_examples() {
        let a1 = d("A1");
        let s = a1.simple_refl(0);
        let x = ExtElt { mu: vec![1], w: a1.identity() };
        let y = ExtElt { mu: vec![0], w: s };
        assert_eq!(a1.ext_mul(&x, &y), ExtElt { mu: vec![1], w: s });
        let z = ExtElt { mu: vec![1], w: s };
        assert_eq!(a1.ext_inv(&z), z); // pi^acheck s is an involution
        let gl2 = d("GL2");
        let s = gl2.simple_refl(0);
        let e1s = ExtElt { mu: vec![1, 0], w: s };
        assert_eq!(
            gl2.ext_mul(&e1s, &e1s),
            ExtElt { mu: vec![1, 1], w: gl2.identity() }
        );
    }

    #[test]
    fn ext_length_examples() {
        let a1 = d("A1");
        let s = a1.simple_refl(0);
        assert_eq!(a1.ext_length(&ExtElt { mu: vec![1], w: a1.identity() }), 2);
        assert_eq!(a1.ext_length(&ExtElt { mu: vec![1], w: s }), 1);
        let gl2 = d("GL2");
        let s = gl2.simple_refl(0);
        assert_eq!(gl2.ext_length(&ExtElt { mu: vec![1, 0], w: s }), 0);
        assert_eq!(gl2.ext_length(&gl2.ext_identity()), 0);
    }

    #[test]
    fn ext_length_restricts_to_finite_length() {
        for name in ["A2", "B2", "G2", "GL3"] {
            let rd = d(name);
            for w in rd.all_elements() {
                let x = ExtElt::finite(w, rd.rank());
                assert_eq!(rd.ext_length(&x), rd.length(w));
            }
            // l(pi^mu) = <2rho, mu> for dominant mu
            let mu = rd.witness().to_vec();
            assert_eq!(
                rd.ext_length(&ExtElt::translation(mu.clone())) as i64,
                rd.pairing(rd.two_rho_full(), &mu)
            );
        }
    }

    #[test]
    fn coset_representatives_a2() {
        let a2 = d("A2");
        let l1 = LeviSet::new(vec![0], 2).unwrap();
        let reps = a2.min_coset_reps(&l1);
        let words: Vec<&[usize]> = reps.iter().map(|&w| a2.word(w)).collect();
        assert_eq!(words, vec![&[] as &[usize], &[1], &[1, 0]]); // e, s2, s2s1
        assert_eq!(a2.min_coset_reps(&LeviSet::full(2)).len(), 1);
        assert_eq!(a2.min_coset_reps(&LeviSet::empty()).len(), 6);
    }

    #[test]
    fn coset_counts_multiply() {
        for name in ["A2", "B2", "G2", "A1xA1"] {
            let rd = d(name);
            let n = rd.num_simple();
            for mask in 0..(1u32 << n) {
                let levi =
                    LeviSet::new((0..n).filter(|i| mask & (1 << i) != 0).collect(), n).unwrap();
                let wm = rd.levi_elements(&levi).len();
                let reps = rd.min_coset_reps(&levi).len();
                assert_eq!(wm * reps, rd.weyl_order(), "{} {:?}", name, levi);
            }
        }
    }

    #[test]
    fn pq_decompose_examples() {
        let a2 = d("A2");
        let l1 = LeviSet::new(vec![0], 2).unwrap();
        let s1s2 = a2.from_word(&[0, 1]).unwrap();
        let (wpp, wp) = a2.pq_decompose(s1s2, &l1);
        assert_eq!(a2.word(wpp), &[0]);
        assert_eq!(a2.word(wp), &[1]);
        let w0 = a2.w0();
        let (wpp, wp) = a2.pq_decompose(w0, &l1);
        assert_eq!(a2.word(wpp), &[0]);
        assert_eq!(a2.word(wp), &[1, 0]);
        // elements of W_M decompose trivially
        let s1 = a2.simple_refl(0);
        assert_eq!(a2.pq_decompose(s1, &l1), (s1, a2.identity()));
    }

    #[test]
    fn pq_lengths_additive_exhaustive() {
        for name in ["A2", "B2", "G2", "A1xA1"] {
            let rd = d(name);
            let n = rd.num_simple();
            for mask in 0..(1u32 << n) {
                let levi =
                    LeviSet::new((0..n).filter(|i| mask & (1 << i) != 0).collect(), n).unwrap();
                let reps: std::collections::HashSet<WeylId> =
                    rd.min_coset_reps(&levi).into_iter().collect();
                for w in rd.all_elements() {
                    let (wpp, wp) = rd.pq_decompose(w, &levi);
                    assert_eq!(rd.wmul(wpp, wp), w);
                    assert_eq!(rd.length(w), rd.length(wpp) + rd.length(wp));
                    assert!(reps.contains(&wp));
                }
            }
        }
    }

    #[test]
    fn conjugate_levi_examples() {
        let a2 = d("A2");
        let l1 = LeviSet::new(vec![0], 2).unwrap();
        let (lp, w0p) = a2.conjugate_levi(&l1).unwrap();
        assert_eq!(lp.indices(), &[1]);
        assert_eq!(a2.word(w0p), &[1, 0]); // s2 s1
        let (lp, w0p) = a2.conjugate_levi(&LeviSet::full(2)).unwrap();
        assert_eq!(lp.indices(), &[0, 1]);
        assert_eq!(w0p, a2.identity());
        let (lp, w0p) = a2.conjugate_levi(&LeviSet::empty()).unwrap();
        assert!(lp.is_empty());
        assert_eq!(w0p, a2.w0());
    }

    #[test]
    fn conjugate_levi_is_involutive() {
        for name in ["A2", "B2", "G2", "GL3"] {
            let rd = d(name);
            let n = rd.num_simple();
            for mask in 0..(1u32 << n) {
                let levi =
                    LeviSet::new((0..n).filter(|i| mask & (1 << i) != 0).collect(), n).unwrap();
                let (lp, _) = rd.conjugate_levi(&levi).unwrap();
                let (lpp, _) = rd.conjugate_levi(&lp).unwrap();
                assert_eq!(levi, lpp, "{} {:?}", name, levi);
            }
        }
    }

    #[test]
    fn length_formula_7_2_exhaustive() {
        for name in ["A2", "GL3", "B2", "G2"] {
            let rd = d(name);
            let n = rd.num_simple();
            for mask in 0..(1u32 << n) {
                let levi =
                    LeviSet::new((0..n).filter(|i| mask & (1 << i) != 0).collect(), n).unwrap();
                let (_, w0p) = rd.conjugate_levi(&levi).unwrap();
                let w0p_inv = rd.winv(w0p);
                for wpp in rd.levi_elements(&levi) {
                    let conj = rd.wmul(rd.wmul(w0p_inv, wpp), w0p);
                    assert_eq!(rd.length(conj), rd.length(wpp));
                }
            }
        }
    }

    #[test]
    fn levi_datum_matches_ambient_combinatorics() {
        let b2 = d("B2");
        let l = LeviSet::new(vec![1], 2).unwrap();
        let levi = b2.levi_datum(&l).unwrap();
        assert_eq!(levi.weyl_order(), 2);
        assert_eq!(levi.two_rho_full(), b2.two_rho(&l).as_slice());
        assert_eq!(levi.rank(), b2.rank());
    }

    #[test]
    fn invalid_data_are_rejected() {
        assert!(RootDatum::preset("E8").is_err());
        assert!(RootDatum::new("bad", 1, vec![vec![1]], vec![vec![1]]).is_err()); // <a,ac> = 1
        // affine A1 (infinite group): <a1,ac2> = <a2,ac1> = -2
        let res = RootDatum::new(
            "affine",
            2,
            vec![vec![2, -2], vec![-2, 2]],
            vec![vec![1, -1], vec![-1, 1]],
        );
        assert!(res.is_err());
    }

    #[test]
    fn w0_conjugation_preserves_simple_roots_setwise() {
        for name in ["A2", "B2", "G2"] {
            let rd = d(name);
            let w0 = rd.w0();
            for i in 0..rd.num_simple() {
                let img = rd.act_char(w0, rd.simple_root(i));
                let neg: Vec<i64> = img.iter().map(|x| -x).collect();
                assert!((0..rd.num_simple()).any(|j| rd.simple_root(j) == neg.as_slice()));
            }
        }
    }
}
