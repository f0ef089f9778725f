#![allow(dead_code)]

use std::collections::{BTreeMap, HashSet};
use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::Rng;

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data")
}

pub fn bundled(name: &str) -> PathBuf {
    data_dir().join(name)
}

pub fn random_word<R: Rng>(rng: &mut R, alphabet: &[u8], min: usize, max: usize) -> String {
    let len = rng.gen_range(min..=max);
    (0..len)
        .map(|_| *alphabet.choose(rng).unwrap() as char)
        .collect()
}

/// Entries of a lexicon satisfying every invariant: roots listed under
/// themselves, no form shared between roots, no repeats inside an entry.
pub fn random_valid_entries<R: Rng>(
    rng: &mut R,
    max_roots: usize,
) -> BTreeMap<String, Vec<String>> {
    let alphabet = b"abcdefghijklmnoqrstuwxy";
    let mut claimed = HashSet::new();
    let mut entries = BTreeMap::new();
    let roots = rng.gen_range(1..=max_roots);
    while entries.len() < roots {
        let root = random_word(rng, alphabet, 2, 6);
        if !claimed.insert(root.clone()) {
            continue;
        }
        let mut forms = vec![root.clone()];
        for _ in 0..rng.gen_range(0..6) {
            let suffix = random_word(rng, b"aeiouydhnks", 1, 4);
            let form = format!("{root}{suffix}");
            if claimed.insert(form.clone()) {
                forms.push(form);
            }
        }
        forms.shuffle(rng);
        entries.insert(root, forms);
    }
    entries
}

/// Direct evaluation of `stem(c1|...|ck)[a-z']*` anchored at both ends, by
/// trying every split of the word.
pub fn brute_force_match(stem: &str, continuations: &[String], word: &str) -> bool {
    let w: Vec<char> = word.chars().collect();
    let stem: Vec<char> = stem.chars().collect();
    for i in 0..=w.len() {
        if w[..i] != stem[..] {
            continue;
        }
        for j in i + 1..=w.len() {
            let middle: String = w[i..j].iter().collect();
            let tail_ok = w[j..].iter().all(|&c| c.is_ascii_lowercase() || c == '\'');
            if continuations.contains(&middle) && tail_ok {
                return true;
            }
        }
    }
    false
}
