//! JSON wire formats.
//!
//! All numbers are exact strings; output is canonical (terms in the canonical
//! print order, coefficient pairs by descending `v`-exponent), input is
//! accepted loosely and normalized on load. Simple-reflection and Levi
//! indices are 1-based on the wire.

use crate::coeff::LaurentV;
use crate::error::{CoreError, Result};
use crate::field::RatFunc;
use crate::hecke::{HeckeElt, Terms};
use crate::matrix::KMat;
use crate::modules::{HModule, ModuleMap, UnramifiedCharacter};
use crate::rootdata::{ExtElt, LeviSet, RootDatum, WeylId};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::sync::Arc;

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct TermJson {
    pub mu: Vec<i64>,
    pub w: Vec<usize>,
    pub coeff: Vec<(i64, String)>,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct EltJson {
    pub datum: String,
    pub terms: Vec<TermJson>,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct DatumJson {
    pub name: String,
    pub rank: usize,
    pub simple_roots: Vec<Vec<i64>>,
    pub simple_coroots: Vec<Vec<i64>>,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct ExtJson {
    pub mu: Vec<i64>,
    pub w: Vec<usize>,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct LeviJson {
    pub levi: Vec<usize>,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct ModuleJson {
    pub levi: Vec<usize>,
    pub dim: usize,
    #[serde(rename = "T")]
    pub t: BTreeMap<String, Vec<Vec<String>>>,
    #[serde(rename = "Theta")]
    pub theta: BTreeMap<String, Vec<Vec<String>>>,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct MapJson {
    pub matrix: Vec<Vec<String>>,
    pub verified: Vec<String>,
}

fn word_to_wire(datum: &RootDatum, w: WeylId) -> Vec<usize> {
    datum.word(w).iter().map(|i| i + 1).collect()
}

fn word_from_wire(datum: &RootDatum, word: &[usize]) -> Result<WeylId> {
    let zero_based: Vec<usize> = word
        .iter()
        .map(|&i| {
            if i == 0 || i > datum.num_simple() {
                Err(CoreError::Parse(format!(
                    "field `w`: index {} out of range 1..={}",
                    i,
                    datum.num_simple()
                )))
            } else {
                Ok(i - 1)
            }
        })
        .collect::<Result<_>>()?;
    datum.from_word(&zero_based)
}

/// Coset-representative key, e.g. `e` or `s2s1`.
pub fn rep_key(datum: &RootDatum, w: WeylId) -> String {
    if w == datum.identity() {
        "e".to_string()
    } else {
        datum
            .word(w)
            .iter()
            .map(|i| format!("s{}", i + 1))
            .collect::<Vec<_>>()
            .join("")
    }
}

pub fn parse_rep_key(datum: &RootDatum, key: &str) -> Result<WeylId> {
    if key == "e" {
        return Ok(datum.identity());
    }
    let mut word = Vec::new();
    for part in key.split('s').filter(|p| !p.is_empty()) {
        let i: usize = part
            .parse()
            .map_err(|_| CoreError::Parse(format!("bad representative key `{}`", key)))?;
        word.push(i);
    }
    word_from_wire(datum, &word)
}

pub fn elt_to_json(h: &HeckeElt) -> EltJson {
    let datum = h.datum();
    EltJson {
        datum: datum.name().to_string(),
        terms: h
            .canonical_terms()
            .into_iter()
            .map(|(mu, w, c)| TermJson {
                mu: mu.clone(),
                w: word_to_wire(datum, w),
                coeff: c.coeff_pairs(),
            })
            .collect(),
    }
}

pub fn elt_from_json(datum: &Arc<RootDatum>, j: &EltJson) -> Result<HeckeElt> {
    if j.datum != datum.name() {
        return Err(CoreError::DatumMismatch {
            expected: datum.name().to_string(),
            found: j.datum.clone(),
        });
    }
    let mut terms = Terms::new();
    for t in &j.terms {
        if t.mu.len() != datum.rank() {
            return Err(CoreError::Parse(format!(
                "field `mu`: expected {} coordinates, got {}",
                datum.rank(),
                t.mu.len()
            )));
        }
        let w = word_from_wire(datum, &t.w)?;
        let c = LaurentV::from_coeff_pairs(&t.coeff)
            .map_err(|e| CoreError::Parse(format!("field `coeff`: {}", e)))?;
        if !c.is_zero() {
            crate::hecke::add_term_pub(&mut terms, (t.mu.clone(), w), c);
        }
    }
    Ok(HeckeElt::from_terms(datum, terms))
}

pub fn datum_to_json(datum: &RootDatum) -> DatumJson {
    DatumJson {
        name: datum.name().to_string(),
        rank: datum.rank(),
        simple_roots: (0..datum.num_simple())
            .map(|i| datum.simple_root(i).to_vec())
            .collect(),
        simple_coroots: (0..datum.num_simple())
            .map(|i| datum.simple_coroot(i).to_vec())
            .collect(),
    }
}

pub fn datum_from_json(j: &DatumJson) -> Result<Arc<RootDatum>> {
    if j.simple_roots.iter().chain(&j.simple_coroots).any(|v| v.len() != j.rank) {
        return Err(CoreError::Parse(
            "field `rank` disagrees with the vector lengths".into(),
        ));
    }
    RootDatum::new(j.name.clone(), j.rank, j.simple_roots.clone(), j.simple_coroots.clone())
}

pub fn ext_to_json(datum: &RootDatum, x: &ExtElt) -> ExtJson {
    ExtJson { mu: x.mu.clone(), w: word_to_wire(datum, x.w) }
}

pub fn ext_from_json(datum: &RootDatum, j: &ExtJson) -> Result<ExtElt> {
    if j.mu.len() != datum.rank() {
        return Err(CoreError::Parse(format!(
            "field `mu`: expected {} coordinates, got {}",
            datum.rank(),
            j.mu.len()
        )));
    }
    Ok(ExtElt { mu: j.mu.clone(), w: word_from_wire(datum, &j.w)? })
}

pub fn levi_from_json(datum: &RootDatum, j: &LeviJson) -> Result<LeviSet> {
    let zero: Vec<usize> = j
        .levi
        .iter()
        .map(|&i| {
            if i == 0 {
                Err(CoreError::Parse("field `levi`: indices are 1-based".into()))
            } else {
                Ok(i - 1)
            }
        })
        .collect::<Result<_>>()?;
    LeviSet::new(zero, datum.num_simple())
}

pub fn levi_to_json(levi: &LeviSet) -> LeviJson {
    LeviJson { levi: levi.indices().iter().map(|i| i + 1).collect() }
}

pub fn parse_levi_flag(datum: &RootDatum, flag: &str) -> Result<LeviSet> {
    let flag = flag.trim();
    if flag.is_empty() || flag == "none" {
        return Ok(LeviSet::empty());
    }
    if flag == "full" {
        return Ok(LeviSet::full(datum.num_simple()));
    }
    let indices: Vec<usize> = flag
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<usize>()
                .map_err(|_| CoreError::Parse(format!("bad Levi index `{}`", p)))
        })
        .collect::<Result<_>>()?;
    levi_from_json(datum, &LeviJson { levi: indices })
}

fn kmat_to_strings(m: &KMat) -> Vec<Vec<String>> {
    (0..m.rows)
        .map(|i| m.row(i).iter().map(|x| x.to_string()).collect())
        .collect()
}

fn kmat_from_strings(rows: &[Vec<String>], field: &str) -> Result<KMat> {
    let parsed: Vec<Vec<RatFunc>> = rows
        .iter()
        .map(|row| {
            row.iter()
                .map(|s| {
                    s.parse::<RatFunc>().map_err(|_| {
                        CoreError::Parse(format!("field `{}`: bad entry `{}`", field, s))
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    Ok(KMat::from_rows(parsed))
}

pub fn module_to_json(m: &HModule) -> ModuleJson {
    ModuleJson {
        levi: m.levi().indices().iter().map(|i| i + 1).collect(),
        dim: m.dim(),
        t: m
            .levi()
            .indices()
            .iter()
            .filter_map(|&i| m.t_mat(i).map(|mat| ((i + 1).to_string(), kmat_to_strings(mat))))
            .collect(),
        theta: (0..m.datum().rank())
            .map(|j| ((j + 1).to_string(), kmat_to_strings(m.theta_mat(j))))
            .collect(),
    }
}

pub fn module_from_json(datum: &Arc<RootDatum>, j: &ModuleJson) -> Result<HModule> {
    let levi = levi_from_json(datum, &LeviJson { levi: j.levi.clone() })?;
    let mut t_mats = BTreeMap::new();
    for (key, rows) in &j.t {
        let idx: usize = key
            .parse()
            .map_err(|_| CoreError::Parse(format!("field `T`: bad key `{}`", key)))?;
        if idx == 0 || !levi.contains(idx - 1) {
            return Err(CoreError::Parse(format!(
                "field `T`: key `{}` is not in the Levi",
                key
            )));
        }
        let m = kmat_from_strings(rows, "T")?;
        if m.rows != j.dim || m.cols != j.dim {
            return Err(CoreError::Parse(format!(
                "field `T`: matrix `{}` is not {}x{}",
                key, j.dim, j.dim
            )));
        }
        t_mats.insert(idx - 1, m);
    }
    if t_mats.len() != levi.len() {
        return Err(CoreError::Parse(
            "field `T`: one matrix per Levi index is required".into(),
        ));
    }
    let mut theta_mats = Vec::new();
    for j_idx in 0..datum.rank() {
        let key = (j_idx + 1).to_string();
        let rows = j.theta.get(&key).ok_or_else(|| {
            CoreError::Parse(format!("field `Theta`: missing key `{}`", key))
        })?;
        let m = kmat_from_strings(rows, "Theta")?;
        if m.rows != j.dim || m.cols != j.dim {
            return Err(CoreError::Parse(format!(
                "field `Theta`: matrix `{}` is not {}x{}",
                key, j.dim, j.dim
            )));
        }
        theta_mats.push(m);
    }
    Ok(HModule::new(datum, levi, j.dim, t_mats, theta_mats))
}

pub fn map_to_json(m: &ModuleMap) -> MapJson {
    MapJson {
        matrix: kmat_to_strings(&m.matrix),
        verified: m.verified_labels().iter().map(|s| s.to_string()).collect(),
    }
}

/// Parse `--chi` values: comma-separated field elements, one per lattice
/// coordinate.
pub fn chi_from_flag(datum: &Arc<RootDatum>, flag: &str) -> Result<UnramifiedCharacter> {
    let values: Vec<RatFunc> = flag
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<RatFunc>()
                .map_err(|_| CoreError::Parse(format!("bad character value `{}`", p)))
        })
        .collect::<Result<_>>()?;
    UnramifiedCharacter::new(datum, values)
}

pub fn decomposition_to_json(
    datum: &RootDatum,
    parts: &BTreeMap<WeylId, HeckeElt>,
) -> BTreeMap<String, EltJson> {
    parts
        .iter()
        .map(|(w, elt)| (rep_key(datum, *w), elt_to_json(elt)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::LaurentV;
    use proptest::prelude::*;

    fn d(name: &str) -> Arc<RootDatum> {
        RootDatum::preset(name).unwrap()
    }

    #[test]
    fn element_wire_format_matches_contract() {
        let a1 = d("A1");
        let ts = HeckeElt::t_simple(&a1, 0);
        let sq = ts.mul(&ts);
        let j = elt_to_json(&sq);
        let text = serde_json::to_string(&j).unwrap();
        assert_eq!(
            text,
            r#"{"datum":"A1","terms":[{"mu":[0],"w":[],"coeff":[[2,"1"]]},{"mu":[0],"w":[1],"coeff":[[2,"1"],[0,"-1"]]}]}"#
        );
        let back = elt_from_json(&a1, &serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, sq);
    }

    #[test]
    fn loose_input_is_normalized() {
        let a1 = d("A1");
        // duplicate keys merge, zero terms drop
        let j: EltJson = serde_json::from_str(
            r#"{"datum":"A1","terms":[
                {"mu":[1],"w":[1],"coeff":[[0,"1"]]},
                {"mu":[1],"w":[1],"coeff":[[0,"-1"]]},
                {"mu":[0],"w":[],"coeff":[[0,"2/4"]]}
            ]}"#,
        )
        .unwrap();
        let h = elt_from_json(&a1, &j).unwrap();
        assert_eq!(
            h,
            HeckeElt::one(&a1).scale(&LaurentV::monomial(
                0,
                num::BigRational::new(1.into(), 2.into())
            ))
        );
    }

    #[test]
    fn datum_and_ext_roundtrip() {
        let b2 = d("B2");
        let dj = datum_to_json(&b2);
        let back = datum_from_json(&dj).unwrap();
        assert!(back.same_datum(&b2));
        let x = ExtElt { mu: vec![1, -2], w: b2.from_word(&[0, 1]).unwrap() };
        let xj = ext_to_json(&b2, &x);
        assert_eq!(ext_from_json(&b2, &xj).unwrap(), x);
    }

    #[test]
    fn rep_keys() {
        let a2 = d("A2");
        assert_eq!(rep_key(&a2, a2.identity()), "e");
        let w = a2.from_word(&[1, 0]).unwrap();
        assert_eq!(rep_key(&a2, w), "s2s1");
        assert_eq!(parse_rep_key(&a2, "s2s1").unwrap(), w);
        assert_eq!(parse_rep_key(&a2, "e").unwrap(), a2.identity());
    }

    #[test]
    fn module_roundtrip() {
        let a1 = d("A1");
        let chi = UnramifiedCharacter::new(&a1, vec!["v^3".parse().unwrap()]).unwrap();
        let ps = crate::modules::principal_series(&a1, &chi, &LeviSet::full(1)).unwrap();
        let j = module_to_json(&ps);
        let back = module_from_json(&a1, &j).unwrap();
        assert_eq!(back.dim(), 2);
        assert_eq!(back.t_mat(0).unwrap(), ps.t_mat(0).unwrap());
        assert_eq!(back.theta_mat(0), ps.theta_mat(0));
        assert!(back.validate().is_ok());
    }

    #[test]
    fn errors_name_the_offending_field() {
        let a1 = d("A1");
        let j: EltJson = serde_json::from_str(
            r#"{"datum":"A1","terms":[{"mu":[1,2],"w":[],"coeff":[[0,"1"]]}]}"#,
        )
        .unwrap();
        let err = elt_from_json(&a1, &j).unwrap_err().to_string();
        assert!(err.contains("mu"), "{}", err);
        let j: EltJson = serde_json::from_str(
            r#"{"datum":"A1","terms":[{"mu":[1],"w":[7],"coeff":[[0,"1"]]}]}"#,
        )
        .unwrap();
        let err = elt_from_json(&a1, &j).unwrap_err().to_string();
        assert!(err.contains("w"), "{}", err);
        let j: EltJson =
            serde_json::from_str(r#"{"datum":"GL2","terms":[]}"#).unwrap();
        assert!(matches!(
            elt_from_json(&a1, &j).unwrap_err(),
            CoreError::DatumMismatch { .. }
        ));
    }

    fn arb_elt() -> impl Strategy<Value = HeckeElt> {
        let rd = d("B2");
        proptest::collection::vec(
            (
                proptest::collection::vec(-2i64..=2, 2),
                0u32..8,
                -3i64..=3,
                -3i64..=3,
            ),
            0..5,
        )
        .prop_map(move |ts| {
            let mut h = HeckeElt::zero(&rd);
            for (mu, w, k, c) in ts {
                h = h.add(
                    &HeckeElt::theta(&rd, &mu)
                        .mul(&HeckeElt::t(&rd, WeylId(w)))
                        .scale(&LaurentV::monomial(k, num::BigRational::from_integer(c.into()))),
                );
            }
            h
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn element_json_roundtrip(h in arb_elt()) {
            let rd = h.datum().clone();
            let j = elt_to_json(&h);
            let text = serde_json::to_string(&j).unwrap();
            let back = elt_from_json(&rd, &serde_json::from_str(&text).unwrap()).unwrap();
            prop_assert_eq!(back, h);
        }
    }
}
