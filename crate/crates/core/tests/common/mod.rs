#![allow(dead_code)]

use trapsem::oracle::{gen_program, GenConfig};
use trapsem::{Interp3, Program, Value3};

/// `count` seeded configurations cycling the atom count through `1..=max_atoms`.
pub fn corpus(count: u64, max_atoms: usize, neg_prob: f64, salt: u64) -> Vec<GenConfig> {
    (0..count)
        .map(|k| {
            let n_atoms = 1 + (k as usize % max_atoms);
            GenConfig {
                seed: salt.wrapping_mul(1_000_003).wrapping_add(k),
                n_atoms,
                n_rules: n_atoms + (k as usize % (n_atoms + 2)),
                max_body: 3,
                neg_prob,
            }
        })
        .collect()
}

pub fn programs(configs: &[GenConfig]) -> Vec<Program> {
    configs.iter().map(|c| gen_program(c).program).collect()
}

/// All `3^n` three-valued interpretations.
pub fn all_interp3(n: usize) -> Vec<Interp3> {
    (0..3u64.pow(n as u32))
        .map(|mut k| {
            let values: Vec<Value3> = (0..n)
                .map(|_| {
                    let v = [Value3::F, Value3::T, Value3::U][(k % 3) as usize];
                    k /= 3;
                    v
                })
                .collect();
            Interp3::from_values(&values).unwrap()
        })
        .collect()
}
