//! Seeded class-balanced train/query sampling.
//!
//! The generator is ChaCha8 seeded through `SeedableRng::seed_from_u64`,
//! which is fixed across platforms. Classes are visited in ascending label
//! order; the members of each class (in file order) are shuffled, the first
//! `per_class_train` go to training and the next `per_class_query` to query.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::idx::LabeledImage;
use crate::error::{Error, Result};

/// Name of the sampling generator, recorded in reports.
pub const SAMPLER: &str = "chacha8/seed_from_u64";

#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    pub train: Vec<LabeledImage>,
    pub query: Vec<LabeledImage>,
    pub seed: u64,
    pub per_class_train: usize,
    pub per_class_query: usize,
}

/// Draws train and query sets from one pool (disjoint).
pub fn sample_dataset(
    all: &[LabeledImage],
    seed: u64,
    per_class_train: usize,
    per_class_query: usize,
) -> Result<Dataset> {
    let picks = pick(all, seed, per_class_train + per_class_query, "pool")?;
    let mut train = Vec::new();
    let mut query = Vec::new();
    for members in picks.values() {
        train.extend(members[..per_class_train].iter().map(|&i| all[i].clone()));
        query.extend(members[per_class_train..].iter().map(|&i| all[i].clone()));
    }
    Ok(Dataset {
        train,
        query,
        seed,
        per_class_train,
        per_class_query,
    })
}

/// Draws training images from `train_pool` and query images from a separate
/// `query_pool` (e.g. the MNIST test split).
pub fn sample_split(
    train_pool: &[LabeledImage],
    query_pool: &[LabeledImage],
    seed: u64,
    per_class_train: usize,
    per_class_query: usize,
) -> Result<Dataset> {
    let train_picks = pick(train_pool, seed, per_class_train, "training pool")?;
    let query_picks = pick(
        query_pool,
        seed.wrapping_add(0x9e37_79b9_7f4a_7c15),
        per_class_query,
        "query pool",
    )?;
    let gather = |pool: &[LabeledImage], picks: &BTreeMap<u8, Vec<usize>>| {
        picks
            .values()
            .flat_map(|m| m.iter().map(|&i| pool[i].clone()))
            .collect::<Vec<_>>()
    };
    Ok(Dataset {
        train: gather(train_pool, &train_picks),
        query: gather(query_pool, &query_picks),
        seed,
        per_class_train,
        per_class_query,
    })
}

fn pick(
    pool: &[LabeledImage],
    seed: u64,
    per_class: usize,
    what: &str,
) -> Result<BTreeMap<u8, Vec<usize>>> {
    let mut classes: BTreeMap<u8, Vec<usize>> = BTreeMap::new();
    for (i, item) in pool.iter().enumerate() {
        classes.entry(item.label).or_default().push(i);
    }
    if classes.is_empty() {
        return Err(Error::invalid(format!("{what} is empty")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for (label, members) in classes.iter_mut() {
        if members.len() < per_class {
            return Err(Error::invalid(format!(
                "class {label} of the {what} has {} images, {per_class} needed",
                members.len()
            )));
        }
        members.shuffle(&mut rng);
        members.truncate(per_class);
    }
    Ok(classes)
}
