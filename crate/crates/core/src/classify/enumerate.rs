use std::collections::{BTreeMap, HashSet};

use rayon::prelude::*;

use super::{Provenance, TypeCatalog};
use crate::conjtest::{form_automorphisms, q_conjugacy, z_conjugacy_with_profiles, Verdict, ZProfile, DEFAULT_SEARCH_BOUND};
use crate::error::{Error, Result};
use crate::exact::IntMatrix;
use crate::matgroup::IntGroup;

/// A maximal finite group given as the stabilizer of a Gram matrix.
#[derive(Clone, Debug)]
pub struct Seed {
    pub label: String,
    pub gram: IntMatrix,
}

/// Number of Z-classes expected in dimensions 1, 2, 3.
pub fn expected_z_count(d: usize) -> Option<usize> {
    match d {
        1 => Some(2),
        2 => Some(13),
        3 => Some(73),
        _ => None,
    }
}

/// Gram matrices whose automorphism groups contain a conjugate of every
/// finite subgroup of `GL_d(Z)`, for `d <= 3`.
pub fn seed_forms(d: usize) -> Result<Vec<Seed>> {
    let seed = |label: &str, rows: &[&[i64]]| Seed { label: label.to_string(), gram: IntMatrix::from_i64(rows) };
    Ok(match d {
        1 => vec![seed("line", &[&[1]])],
        2 => vec![seed("square", &[&[1, 0], &[0, 1]]), seed("hexagonal", &[&[2, -1], &[-1, 2]])],
        3 => vec![
            seed("cubic P", &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]),
            seed("cubic F", &[&[2, 1, 1], &[1, 2, 1], &[1, 1, 2]]),
            seed("cubic I", &[&[3, -1, -1], &[-1, 3, -1], &[-1, -1, 3]]),
            seed("hexagonal", &[&[2, -1, 0], &[-1, 2, 0], &[0, 0, 1]]),
        ],
        _ => return Err(Error::UnsupportedDimension(d)),
    })
}

/// Builds the Z-class catalog for `d` in 1..=3 and checks the class count.
pub fn enumerate_z_types(d: usize) -> Result<TypeCatalog> {
    let seeds = seed_forms(d)?;
    let catalog = enumerate_with_seeds(d, &seeds)?;
    let expected = expected_z_count(d).expect("seeded dimensions have a known count");
    if catalog.z_count() != expected {
        return Err(Error::IncompleteSeedSet { dimension: d, found: catalog.z_count(), expected });
    }
    Ok(catalog)
}

fn generator_key(g: &IntGroup) -> Result<Vec<IntMatrix>> {
    g.small_generating_set()
}

/// Every subgroup of every seed, deduplicated up to Z-conjugacy, without a
/// count check.
///
/// Each class is represented by the member whose greedy generating list is
/// lexicographically least. Representatives are sorted by order, then
/// profile, then generators.
pub fn enumerate_with_seeds(d: usize, seeds: &[Seed]) -> Result<TypeCatalog> {
    let mut candidates: Vec<IntGroup> = Vec::new();
    let mut seen: HashSet<Vec<IntMatrix>> = HashSet::new();
    for s in seeds {
        let aut = form_automorphisms(&s.gram)?;
        for h in aut.all_subgroups()? {
            let key = h.elements()?.to_vec();
            if seen.insert(key) {
                candidates.push(h);
            }
        }
    }
    let profiles: Vec<ZProfile> = candidates.par_iter().map(ZProfile::of).collect::<Result<_>>()?;
    let mut buckets: BTreeMap<&ZProfile, Vec<usize>> = BTreeMap::new();
    for (i, p) in profiles.iter().enumerate() {
        buckets.entry(p).or_default().push(i);
    }
    let bucket_list: Vec<(&ZProfile, Vec<usize>)> = buckets.into_iter().collect();
    let classes_per_bucket: Vec<Vec<Vec<usize>>> = bucket_list
        .par_iter()
        .map(|(p, members)| split_bucket(&candidates, p, members))
        .collect::<Result<_>>()?;

    let mut reps: Vec<(IntGroup, ZProfile, Vec<IntMatrix>)> = Vec::new();
    for ((p, _), classes) in bucket_list.iter().zip(classes_per_bucket) {
        for class in classes {
            let mut best: Option<(Vec<IntMatrix>, usize)> = None;
            for &i in &class {
                let key = generator_key(&candidates[i])?;
                if best.as_ref().is_none_or(|(k, _)| key < *k) {
                    best = Some((key, i));
                }
            }
            let (gens, i) = best.expect("classes are nonempty");
            let rep = IntGroup::new(d, gens.clone())?;
            let _ = rep.elements()?;
            debug_assert_eq!(rep.order()?, candidates[i].order()?);
            reps.push((rep, (*p).clone(), gens));
        }
    }
    reps.sort_by(|a, b| {
        a.1.order.cmp(&b.1.order).then_with(|| a.1.cmp(&b.1)).then_with(|| a.2.cmp(&b.2))
    });
    let provenance = Provenance {
        seeds: seeds.iter().map(|s| (s.label.clone(), s.gram.clone())).collect(),
        candidates: candidates.len(),
        buckets: bucket_list.len(),
    };
    let catalog = TypeCatalog::new(d, reps.iter().map(|r| r.0.clone()).collect(), Vec::new(), provenance);
    let _ = catalog.profiles.set(reps.into_iter().map(|r| r.1).collect());
    Ok(catalog)
}

/// Splits candidates with equal profiles into Z-classes.
fn split_bucket(candidates: &[IntGroup], profile: &ZProfile, members: &[usize]) -> Result<Vec<Vec<usize>>> {
    let mut classes: Vec<Vec<usize>> = Vec::new();
    'next: for &i in members {
        for class in classes.iter_mut() {
            let j = class[0];
            let c = z_conjugacy_with_profiles(&candidates[i], profile, &candidates[j], profile, DEFAULT_SEARCH_BOUND)?;
            match c.verdict {
                Verdict::Conjugate => {
                    class.push(i);
                    continue 'next;
                }
                Verdict::NotConjugate => {}
                Verdict::Unknown(b) => return Err(Error::UndecidedConjugacy(b)),
            }
        }
        classes.push(vec![i]);
    }
    Ok(classes)
}

/// Groups the Z-classes of `catalog` into Q-classes, bucketing by character
/// fingerprint before pairwise tests. Blocks are sorted by least index.
pub fn partition_q_types(catalog: TypeCatalog) -> Result<TypeCatalog> {
    let reps = catalog.z_classes();
    let mut buckets: BTreeMap<_, Vec<usize>> = BTreeMap::new();
    for (i, g) in reps.iter().enumerate() {
        buckets.entry(g.character_fingerprint()?.clone()).or_default().push(i);
    }
    let split: Vec<Vec<Vec<usize>>> = buckets
        .into_values()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|members| {
            let mut blocks: Vec<Vec<usize>> = Vec::new();
            'next: for &i in members {
                for block in blocks.iter_mut() {
                    if q_conjugacy(&reps[i], &reps[block[0]])?.is_conjugate() {
                        block.push(i);
                        continue 'next;
                    }
                }
                blocks.push(vec![i]);
            }
            Ok(blocks)
        })
        .collect::<Result<_>>()?;
    let mut blocks: Vec<Vec<usize>> = split.into_iter().flatten().collect();
    for b in blocks.iter_mut() {
        b.sort_unstable();
    }
    blocks.sort();
    let TypeCatalog { dimension, z_classes, provenance, profiles, .. } = catalog;
    Ok(TypeCatalog { dimension, z_classes, q_partition: blocks, provenance, profiles })
}
