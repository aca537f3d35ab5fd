//! State congruences and quotient automata.
//!
//! Two states are congruent when the distributions reached by every
//! continuation agree under a chosen key: the exact distribution gives the
//! plain congruence, the quantization vector gives its κ-quantized
//! refinement. Both are computed by Moore-style partition refinement.

use std::collections::{HashMap, VecDeque};

use crate::automaton::{Pdfa, StateId};
use crate::distribution::Distribution;
use crate::error::{Error, Result};
use crate::quantize::quantize_distribution;

pub type ClassId = usize;

/// A partition of the states of one automaton.
#[derive(Debug, Clone)]
pub struct Partition {
    class_of: Vec<ClassId>,
    classes: Vec<Vec<StateId>>,
}

impl Partition {
    pub fn class_of(&self, q: StateId) -> ClassId {
        self.class_of[q]
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    /// Members of a class, in ascending state order.
    pub fn members(&self, c: ClassId) -> &[StateId] {
        &self.classes[c]
    }

    pub fn classes(&self) -> impl Iterator<Item = &[StateId]> {
        self.classes.iter().map(|c| c.as_slice())
    }

    pub fn same_class(&self, a: StateId, b: StateId) -> bool {
        self.class_of[a] == self.class_of[b]
    }

    pub fn is_discrete(&self) -> bool {
        self.classes.iter().all(|c| c.len() == 1)
    }
}

fn group_by_key<K: Eq + std::hash::Hash>(keys: Vec<K>) -> Partition {
    let mut ids: HashMap<K, ClassId> = HashMap::new();
    let mut class_of = Vec::with_capacity(keys.len());
    let mut classes: Vec<Vec<StateId>> = Vec::new();
    for (q, k) in keys.into_iter().enumerate() {
        let next = classes.len();
        let c = *ids.entry(k).or_insert(next);
        if c == classes.len() {
            classes.push(Vec::new());
        }
        classes[c].push(q);
        class_of.push(c);
    }
    Partition { class_of, classes }
}

/// Computes the coarsest partition in which states share a class only if they
/// have equal keys and the partition is closed under transitions per symbol.
///
/// Class ids are assigned in order of the smallest member state, so the
/// output is deterministic; the smallest member doubles as the class
/// representative everywhere else in this module.
pub fn compute_partition<K, F>(pdfa: &Pdfa, key: F) -> Partition
where
    K: Eq + std::hash::Hash,
    F: Fn(&Pdfa, StateId) -> K,
{
    let n = pdfa.num_states();
    let mut partition = group_by_key((0..n).map(|q| key(pdfa, q)).collect());
    loop {
        let sigs: Vec<Vec<ClassId>> = (0..n)
            .map(|q| {
                let mut sig = Vec::with_capacity(pdfa.alphabet().len() + 1);
                sig.push(partition.class_of(q));
                for sym in pdfa.alphabet().symbols() {
                    sig.push(partition.class_of(pdfa.step(q, sym)));
                }
                sig
            })
            .collect();
        let refined = group_by_key(sigs);
        if refined.num_classes() == partition.num_classes() {
            return partition;
        }
        partition = refined;
    }
}

/// Partition under exact equality of distributions.
pub fn exact_partition(pdfa: &Pdfa) -> Partition {
    compute_partition(pdfa, |p, q| p.dist(q).key_bits())
}

/// Partition under κ-quantized equality of distributions.
pub fn quantized_partition(pdfa: &Pdfa, kappa: u32) -> Result<Partition> {
    for q in pdfa.states() {
        quantize_distribution(pdfa.dist(q), kappa)?;
    }
    Ok(compute_partition(pdfa, |p, q| {
        quantize_distribution(p.dist(q), kappa).expect("checked above")
    }))
}

/// True iff no two distinct states are congruent under the partition.
pub fn is_weakly_minimal(partition: &Partition) -> bool {
    partition.is_discrete()
}

/// Builds the quotient automaton of a congruence partition.
///
/// One state per class reachable from the initial class, numbered in BFS
/// discovery order; the class distribution is the representative's (smallest
/// member). Unreachable classes are dropped. Fails with a contract violation
/// if the partition is not closed under transitions.
pub fn quotient(pdfa: &Pdfa, partition: &Partition) -> Result<Pdfa> {
    for (c, members) in partition.classes().enumerate() {
        for sym in pdfa.alphabet().symbols() {
            let target = partition.class_of(pdfa.step(members[0], sym));
            for &q in &members[1..] {
                if partition.class_of(pdfa.step(q, sym)) != target {
                    return Err(Error::ContractViolation(format!(
                        "partition is not a congruence: class {c} splits on symbol {}",
                        pdfa.alphabet().name(sym)
                    )));
                }
            }
        }
    }

    let init_class = partition.class_of(pdfa.initial());
    let mut number: HashMap<ClassId, usize> = HashMap::new();
    let mut order: Vec<ClassId> = Vec::new();
    let mut queue = VecDeque::new();
    number.insert(init_class, 0);
    order.push(init_class);
    queue.push_back(init_class);
    while let Some(c) = queue.pop_front() {
        let rep = partition.members(c)[0];
        for sym in pdfa.alphabet().symbols() {
            let t = partition.class_of(pdfa.step(rep, sym));
            if !number.contains_key(&t) {
                number.insert(t, order.len());
                order.push(t);
                queue.push_back(t);
            }
        }
    }

    let states: Vec<(Distribution, Vec<StateId>)> = order
        .iter()
        .map(|&c| {
            let rep = partition.members(c)[0];
            let trans = pdfa
                .alphabet()
                .symbols()
                .map(|sym| number[&partition.class_of(pdfa.step(rep, sym))])
                .collect();
            (pdfa.dist(rep).clone(), trans)
        })
        .collect();
    Pdfa::new(pdfa.alphabet().clone(), 0, states)
}
