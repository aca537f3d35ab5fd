//! The quantized classification-tree learner.
//!
//! States of the hypothesis are named by *access* strings sitting at the
//! leaves of an n-ary tree; inner nodes carry *distinguishing* strings.
//! To find the class of a string `s` the learner *sifts*: at an inner node
//! with distinguishing string `d` it asks `MQ(s·d)`, quantizes the answer and
//! descends the arc labeled with that quantization vector. Because quantized
//! equality is a congruence the tree needs no clustering, and its leaf count
//! never exceeds the number of quantized congruence classes of the target.
//!
//! Counterexample processing scans the counterexample's prefixes, compares
//! the hypothesis state against the sifted class, and splits the last agreed
//! leaf with a freshly derived distinguishing string. Sifts during the scan
//! may themselves discover classes; the scan restarts whenever that happens,
//! and a counterexample whose mismatch evaporates after such growth counts
//! as spent (the tree already grew, which is all the main loop needs for
//! progress).

use std::collections::HashMap;

use indexmap::IndexMap;

use crate::alphabet::{Alphabet, Sym, Word};
use crate::automaton::Pdfa;
use crate::distribution::Distribution;
use crate::error::{Error, Result};
use crate::quantize::{quantize_distribution, QuantVector};
use crate::teacher::{Comparator, Teacher};

type NodeId = usize;

#[derive(Debug, Clone)]
enum NodeKind {
    Inner {
        dstring: Word,
        children: IndexMap<QuantVector, NodeId>,
    },
    Leaf {
        astring: Word,
        dist: Distribution,
    },
}

#[derive(Debug, Clone)]
struct Node {
    kind: NodeKind,
    parent: Option<NodeId>,
}

/// The n-ary classification tree: inner nodes hold distinguishing strings,
/// arcs hold quantization vectors, leaves hold access strings together with
/// the teacher's distribution for them.
#[derive(Debug, Clone)]
pub struct ClassificationTree {
    kappa: u32,
    nodes: Vec<Node>,
    root: NodeId,
    leaf_of: HashMap<Word, NodeId>,
    acc: Vec<Word>,
    dis: Vec<Word>,
}

impl ClassificationTree {
    /// Root labeled λ with two leaves: λ and the first counterexample.
    fn initialize(
        kappa: u32,
        lambda_dist: Distribution,
        lambda_cell: QuantVector,
        gamma: Word,
        gamma_dist: Distribution,
        gamma_cell: QuantVector,
    ) -> Self {
        debug_assert_ne!(lambda_cell, gamma_cell);
        let mut children = IndexMap::new();
        children.insert(lambda_cell, 1);
        children.insert(gamma_cell, 2);
        let nodes = vec![
            Node {
                kind: NodeKind::Inner {
                    dstring: Vec::new(),
                    children,
                },
                parent: None,
            },
            Node {
                kind: NodeKind::Leaf {
                    astring: Vec::new(),
                    dist: lambda_dist,
                },
                parent: Some(0),
            },
            Node {
                kind: NodeKind::Leaf {
                    astring: gamma.clone(),
                    dist: gamma_dist,
                },
                parent: Some(0),
            },
        ];
        let mut leaf_of = HashMap::new();
        leaf_of.insert(Vec::new(), 1);
        leaf_of.insert(gamma.clone(), 2);
        ClassificationTree {
            kappa,
            nodes,
            root: 0,
            leaf_of,
            acc: vec![Vec::new(), gamma],
            dis: vec![Vec::new()],
        }
    }

    pub fn kappa(&self) -> u32 {
        self.kappa
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn num_leaves(&self) -> usize {
        self.acc.len()
    }

    /// Access strings in discovery order; hypothesis state `i` is `acc[i]`.
    pub fn access_strings(&self) -> &[Word] {
        &self.acc
    }

    pub fn distinguishing_strings(&self) -> &[Word] {
        &self.dis
    }

    pub fn is_access(&self, s: &[Sym]) -> bool {
        self.leaf_of.contains_key(s)
    }

    /// Distribution stored at the leaf of an access string.
    pub fn leaf_dist(&self, s: &[Sym]) -> Option<&Distribution> {
        self.leaf_of.get(s).map(|&id| match &self.nodes[id].kind {
            NodeKind::Leaf { dist, .. } => dist,
            NodeKind::Inner { .. } => unreachable!("leaf_of maps to leaves"),
        })
    }

    /// Arc labels leaving the root, in insertion order.
    pub fn root_arcs(&self) -> Vec<&QuantVector> {
        match &self.nodes[self.root].kind {
            NodeKind::Inner { children, .. } => children.keys().collect(),
            NodeKind::Leaf { .. } => Vec::new(),
        }
    }

    /// Distinguishing string of the deepest common ancestor of two distinct
    /// access strings.
    pub fn lca(&self, a: &[Sym], b: &[Sym]) -> Result<Word> {
        if a == b {
            return Err(Error::Config(
                "lca requires two distinct access strings".into(),
            ));
        }
        let missing = |s: &[Sym]| Error::Config(format!("not an access string: {s:?}"));
        let la = *self.leaf_of.get(a).ok_or_else(|| missing(a))?;
        let lb = *self.leaf_of.get(b).ok_or_else(|| missing(b))?;
        let path = |mut n: NodeId| {
            let mut up = vec![n];
            while let Some(p) = self.nodes[n].parent {
                up.push(p);
                n = p;
            }
            up
        };
        let on_b: std::collections::HashSet<NodeId> = path(lb).into_iter().collect();
        let anc = path(la)
            .into_iter()
            .find(|n| on_b.contains(n))
            .expect("both paths end at the root");
        match &self.nodes[anc].kind {
            NodeKind::Inner { dstring, .. } => Ok(dstring.clone()),
            NodeKind::Leaf { .. } => unreachable!("common ancestors are inner nodes"),
        }
    }

    fn child(&self, node: NodeId, cell: &QuantVector) -> Option<NodeId> {
        match &self.nodes[node].kind {
            NodeKind::Inner { children, .. } => children.get(cell).copied(),
            NodeKind::Leaf { .. } => None,
        }
    }

    fn add_leaf(&mut self, node: NodeId, cell: QuantVector, astring: Word, dist: Distribution) {
        let id = self.nodes.len();
        self.nodes.push(Node {
            kind: NodeKind::Leaf {
                astring: astring.clone(),
                dist,
            },
            parent: Some(node),
        });
        match &mut self.nodes[node].kind {
            NodeKind::Inner { children, .. } => {
                let prev = children.insert(cell, id);
                debug_assert!(prev.is_none(), "sibling arcs must be distinct");
            }
            NodeKind::Leaf { .. } => unreachable!("arcs leave inner nodes"),
        }
        self.leaf_of.insert(astring.clone(), id);
        self.acc.push(astring);
    }

    /// Replaces the leaf of `old_access` by an inner node labeled
    /// `new_dstring` whose children are the old leaf and a new leaf for
    /// `new_access`, under the given arc cells.
    fn split_leaf(
        &mut self,
        old_access: &[Sym],
        new_dstring: Word,
        old_cell: QuantVector,
        new_access: Word,
        new_dist: Distribution,
        new_cell: QuantVector,
    ) {
        debug_assert_ne!(old_cell, new_cell, "split arcs must differ");
        let old_leaf = self.leaf_of[old_access];
        let parent = self.nodes[old_leaf]
            .parent
            .expect("the root is an inner node, leaves always have parents");
        let inner = self.nodes.len();
        let new_leaf = inner + 1;
        let mut children = IndexMap::new();
        children.insert(old_cell, old_leaf);
        children.insert(new_cell, new_leaf);
        self.nodes.push(Node {
            kind: NodeKind::Inner {
                dstring: new_dstring.clone(),
                children,
            },
            parent: Some(parent),
        });
        self.nodes.push(Node {
            kind: NodeKind::Leaf {
                astring: new_access.clone(),
                dist: new_dist,
            },
            parent: Some(inner),
        });
        // Redirect the parent arc onto the new inner node, keeping its label
        // and position.
        match &mut self.nodes[parent].kind {
            NodeKind::Inner { children, .. } => {
                let arc = children
                    .iter()
                    .find_map(|(k, &v)| (v == old_leaf).then(|| k.clone()))
                    .expect("old leaf hangs off its parent");
                children.insert(arc, inner);
            }
            NodeKind::Leaf { .. } => unreachable!("parents are inner nodes"),
        }
        self.nodes[old_leaf].parent = Some(inner);
        self.leaf_of.insert(new_access.clone(), new_leaf);
        self.acc.push(new_access);
        self.dis.push(new_dstring);
    }

    /// Indented text dump: `D` lines are inner nodes, bracketed lines are
    /// arcs, `A` lines are leaves with their stored distribution.
    pub fn dump(&self, alphabet: &Alphabet) -> String {
        fn rec(
            tree: &ClassificationTree,
            alphabet: &Alphabet,
            node: NodeId,
            depth: usize,
            out: &mut String,
        ) {
            let pad = "  ".repeat(depth);
            match &tree.nodes[node].kind {
                NodeKind::Inner { dstring, children } => {
                    out.push_str(&format!("{pad}D {}\n", alphabet.format_word(dstring)));
                    for (cell, &child) in children {
                        out.push_str(&format!("{pad}  [{cell}]\n"));
                        rec(tree, alphabet, child, depth + 1, out);
                    }
                }
                NodeKind::Leaf { astring, dist } => {
                    out.push_str(&format!(
                        "{pad}A {} {dist}\n",
                        alphabet.format_word(astring)
                    ));
                }
            }
        }
        let mut out = String::new();
        rec(self, alphabet, self.root, 0, &mut out);
        out
    }
}

/// Outcome of a learning run.
pub struct QuantOutcome {
    pub pdfa: Pdfa,
    /// The final tree; `None` when the single-state hypothesis was accepted.
    pub tree: Option<ClassificationTree>,
    /// Leaf count after every hypothesis construction.
    pub leaf_history: Vec<usize>,
}

impl QuantOutcome {
    /// Tree node count, the learner's structure size.
    pub fn structure_size(&self) -> usize {
        self.tree.as_ref().map_or(0, |t| t.num_nodes())
    }
}

/// The learner; drives a teacher until the hypothesis is κ-equivalent to the
/// hidden target.
pub struct QuantLearner<'a, T: Teacher> {
    teacher: &'a mut T,
    kappa: u32,
    alphabet: Alphabet,
    tree: Option<ClassificationTree>,
    // Memoized quantization cells of MQ answers, keyed by query string.
    cells: HashMap<Word, QuantVector>,
}

impl<'a, T: Teacher> QuantLearner<'a, T> {
    pub fn new(teacher: &'a mut T, kappa: u32) -> Result<Self> {
        if kappa < 1 {
            return Err(Error::InvalidKappa);
        }
        let alphabet = teacher.alphabet().clone();
        Ok(QuantLearner {
            teacher,
            kappa,
            alphabet,
            tree: None,
            cells: HashMap::new(),
        })
    }

    pub fn tree(&self) -> Option<&ClassificationTree> {
        self.tree.as_ref()
    }

    /// Quantization cell of `MQ(s)`, memoized.
    fn cell(&mut self, s: &[Sym]) -> Result<QuantVector> {
        if let Some(v) = self.cells.get(s) {
            return Ok(v.clone());
        }
        let dist = self.teacher.mq_next_symbol(s)?;
        let v = quantize_distribution(&dist, self.kappa)?;
        self.cells.insert(s.to_vec(), v.clone());
        Ok(v)
    }

    fn tree_ref(&self) -> &ClassificationTree {
        self.tree.as_ref().expect("tree is initialized")
    }

    fn tree_mut(&mut self) -> &mut ClassificationTree {
        self.tree.as_mut().expect("tree is initialized")
    }

    /// Walks `s` down the tree. Returns the access string of the reached leaf
    /// and whether the walk discovered (and added) a new class on the way.
    pub fn sift(&mut self, s: &[Sym]) -> Result<(Word, bool)> {
        let mut node = self.tree_ref().root;
        loop {
            let query = match &self.tree_ref().nodes[node].kind {
                NodeKind::Leaf { astring, .. } => return Ok((astring.clone(), false)),
                NodeKind::Inner { dstring, .. } => {
                    let mut q = s.to_vec();
                    q.extend_from_slice(dstring);
                    q
                }
            };
            let cell = self.cell(&query)?;
            match self.tree_ref().child(node, &cell) {
                Some(next) => node = next,
                None => {
                    let dist = self.teacher.mq_next_symbol(s)?;
                    self.tree_mut().add_leaf(node, cell, s.to_vec(), dist);
                    return Ok((s.to_vec(), true));
                }
            }
        }
    }

    /// One state per access string; transitions by sifting every one-symbol
    /// continuation. Restarts from scratch whenever a sift discovers a new
    /// class (caches and tree growth are kept, so restarts are cheap).
    pub fn build_hypothesis(&mut self) -> Result<Pdfa> {
        'restart: loop {
            let k = self.tree_ref().num_leaves();
            let mut index: HashMap<Word, usize> = HashMap::with_capacity(k);
            for i in 0..k {
                index.insert(self.tree_ref().acc[i].clone(), i);
            }
            let mut rows: Vec<Vec<usize>> = Vec::with_capacity(k);
            for i in 0..k {
                let s = self.tree_ref().acc[i].clone();
                let mut row = Vec::with_capacity(self.alphabet.len());
                for sym in self.alphabet.symbols() {
                    let mut cont = s.clone();
                    cont.push(sym);
                    let (target, updated) = self.sift(&cont)?;
                    if updated {
                        continue 'restart;
                    }
                    row.push(index[&target]);
                }
                rows.push(row);
            }
            let tree = self.tree_ref();
            debug_assert!(tree.acc[0].is_empty(), "state 0 is the λ state");
            let states = (0..k)
                .map(|i| {
                    let dist = tree
                        .leaf_dist(&tree.acc[i])
                        .expect("every access string has a leaf")
                        .clone();
                    (dist, std::mem::take(&mut rows[i]))
                })
                .collect();
            return Pdfa::new(self.alphabet.clone(), 0, states);
        }
    }

    /// Builds the two-leaf tree from a counterexample against the
    /// single-state hypothesis.
    pub fn initialize_tree(&mut self, gamma: &[Sym]) -> Result<()> {
        let lambda_cell = self.cell(&[])?;
        let gamma_cell = self.cell(gamma)?;
        if lambda_cell == gamma_cell {
            return Err(Error::ContractViolation(
                "counterexample is quantization-equal to λ at the root".into(),
            ));
        }
        let lambda_dist = self.teacher.mq_next_symbol(&[])?;
        let gamma_dist = self.teacher.mq_next_symbol(gamma)?;
        self.tree = Some(ClassificationTree::initialize(
            self.kappa,
            lambda_dist,
            lambda_cell,
            gamma.to_vec(),
            gamma_dist,
            gamma_cell,
        ));
        Ok(())
    }

    /// Processes a counterexample for `hyp` (the latest hypothesis built from
    /// the tree): finds the first prefix where the hypothesis state and the
    /// sifted class diverge and splits the last agreed leaf with the
    /// distinguishing string `γ_j · lca(ŝ_j, s_j)`. Grows the leaf count by
    /// at least one; fails with a contract violation if `gamma` is not a
    /// genuine counterexample.
    pub fn process_counterexample(&mut self, gamma: &[Sym], hyp: &Pdfa) -> Result<()> {
        let leaves_before = self.tree_ref().num_leaves();
        'rescan: loop {
            let grew = self.tree_ref().num_leaves() > leaves_before;
            let mut hyp_state = hyp.initial();
            // s_0 = ŝ_0 = λ; the scan starts at j = 1.
            let mut prev_access: Word = Vec::new();
            for j in 1..=gamma.len() {
                let prefix = &gamma[..j];
                let (sifted, updated) = self.sift(prefix)?;
                if updated {
                    continue 'rescan;
                }
                hyp_state = hyp.step(hyp_state, gamma[j - 1]);
                debug_assert!(hyp_state < self.tree_ref().num_leaves());
                let hyp_access = self.tree_ref().acc[hyp_state].clone();
                if hyp_access != sifted {
                    let new_access: Word = gamma[..j - 1].to_vec();
                    if self.tree_ref().is_access(&new_access) {
                        // Only reachable after the tree grew mid-scan; the
                        // counterexample is spent.
                        return if grew {
                            Ok(())
                        } else {
                            Err(Error::ContractViolation(
                                "counterexample scan hit an existing class".into(),
                            ))
                        };
                    }
                    let lca = self.tree_ref().lca(&hyp_access, &sifted)?;
                    let mut dstring = vec![gamma[j - 1]];
                    dstring.extend_from_slice(&lca);

                    let mut old_query = prev_access.clone();
                    old_query.extend_from_slice(&dstring);
                    let old_cell = self.cell(&old_query)?;
                    let mut new_query = new_access.clone();
                    new_query.extend_from_slice(&dstring);
                    let new_cell = self.cell(&new_query)?;
                    if old_cell == new_cell {
                        return Err(Error::ContractViolation(
                            "derived distinguishing string does not separate the split leaves"
                                .into(),
                        ));
                    }
                    let new_dist = self.teacher.mq_next_symbol(&new_access)?;
                    self.tree_mut().split_leaf(
                        &prev_access,
                        dstring,
                        old_cell,
                        new_access,
                        new_dist,
                        new_cell,
                    );
                    return Ok(());
                }
                prev_access = sifted;
            }
            // No mismatch left. Fine if sift-updates already grew the tree.
            return if grew {
                Ok(())
            } else {
                Err(Error::ContractViolation(
                    "counterexample does not distinguish target and hypothesis".into(),
                ))
            };
        }
    }

    /// The main loop: single-state hypothesis, then build/EQ/update until the
    /// teacher accepts.
    pub fn run(&mut self) -> Result<QuantOutcome> {
        let lambda_dist = self.teacher.mq_next_symbol(&[])?;
        let single = Pdfa::single_state(self.alphabet.clone(), lambda_dist)?;
        let mut leaf_history = Vec::new();
        let gamma = match self.teacher.eq(&single, Comparator::Quantized(self.kappa))? {
            None => {
                return Ok(QuantOutcome {
                    pdfa: single,
                    tree: None,
                    leaf_history,
                })
            }
            Some(ce) => ce,
        };
        self.initialize_tree(&gamma.gamma)?;
        loop {
            let hyp = self.build_hypothesis()?;
            leaf_history.push(self.tree_ref().num_leaves());
            match self.teacher.eq(&hyp, Comparator::Quantized(self.kappa))? {
                None => {
                    return Ok(QuantOutcome {
                        pdfa: hyp,
                        tree: self.tree.take(),
                        leaf_history,
                    })
                }
                Some(ce) => self.process_counterexample(&ce.gamma, &hyp)?,
            }
        }
    }
}

/// Runs the learner and returns the final hypothesis.
pub fn learn_quant<T: Teacher>(teacher: &mut T, kappa: u32) -> Result<Pdfa> {
    Ok(QuantLearner::new(teacher, kappa)?.run()?.pdfa)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::quantize::quant_equal;
    use crate::teacher::{oracle_bisim, PdfaTeacher};

    fn w(p: &Pdfa, text: &str) -> Word {
        p.alphabet().parse_word(text).unwrap()
    }

    fn learned_tomita2() -> (Pdfa, ClassificationTree) {
        let t = fixtures::weighted_tomita2();
        let mut teacher = PdfaTeacher::new(t);
        let mut learner = QuantLearner::new(&mut teacher, 10).unwrap();
        let out = learner.run().unwrap();
        (out.pdfa, out.tree.unwrap())
    }

    #[test]
    fn learns_tomita2_exactly() {
        let t = fixtures::weighted_tomita2();
        let (hyp, tree) = learned_tomita2();
        assert_eq!(hyp.num_states(), 4);
        assert_eq!(tree.num_leaves(), 4);
        assert!(oracle_bisim(&t, &hyp, 10).unwrap());
        // All four classes are realized with verbatim distributions, so the
        // hypothesis computes the same function exactly.
        for text in ["", "0", "1", "01", "10", "0110", "1010101"] {
            let s = w(&t, text);
            assert!((t.string_prob(&s) - hyp.string_prob(&s)).abs() < 1e-15);
        }
    }

    #[test]
    fn tomita2_root_arcs_cover_all_cells() {
        let (_, tree) = learned_tomita2();
        let arcs: Vec<String> = tree.root_arcs().iter().map(|a| a.to_string()).collect();
        for expected in ["(0, 5, 5)", "(1, 3, 6)", "(1, 6, 3)"] {
            assert!(arcs.contains(&expected.to_string()), "missing {expected}");
        }
    }

    #[test]
    fn sift_examples_on_learned_tree() {
        let t = fixtures::weighted_tomita2();
        let mut teacher = PdfaTeacher::new(t.clone());
        let mut learner = QuantLearner::new(&mut teacher, 10).unwrap();
        let out = learner.run().unwrap();
        learner.tree = Some(out.tree.unwrap());

        // A string that loops within the 1-class sifts to that class's
        // access string without updates.
        let (hit, updated) = learner.sift(&w(&t, "11")).unwrap();
        assert!(!updated);
        assert_eq!(hit, w(&t, "1"));
        // Access strings sift to themselves.
        for acc in learner.tree().unwrap().access_strings().to_vec() {
            let (hit, updated) = learner.sift(&acc).unwrap();
            assert_eq!(hit, acc);
            assert!(!updated);
        }
        let (hit, updated) = learner.sift(&[]).unwrap();
        assert!(!updated);
        assert!(hit.is_empty());
    }

    #[test]
    fn lca_examples() {
        let t = fixtures::weighted_tomita2();
        let (_, tree) = learned_tomita2();
        // The two states sharing the (0.1, 0.3, 0.6) distribution meet under
        // the inner node labeled "1"; everything else meets at the root λ.
        let shared: Vec<Word> = tree
            .access_strings()
            .iter()
            .filter(|a| quant_equal(tree.leaf_dist(a).unwrap(), t.dist(1), 10).unwrap())
            .cloned()
            .collect();
        assert_eq!(shared.len(), 2);
        assert_eq!(tree.lca(&shared[0], &shared[1]).unwrap(), w(&t, "1"));
        assert_eq!(tree.lca(&[], &w(&t, "1")).unwrap(), Vec::<usize>::new());
        assert!(tree.lca(&shared[0], &shared[0]).is_err());
        assert!(tree.lca(&w(&t, "11011"), &[]).is_err());
    }

    #[test]
    fn learns_perturbed_unary_chain() {
        let a = fixtures::unary_geometric();
        let ae = fixtures::unary_geometric_perturbed(0.05);
        let mut teacher = PdfaTeacher::new(ae);
        let hyp = learn_quant(&mut teacher, 5).unwrap();
        assert_eq!(hyp.num_states(), 2);
        assert!(oracle_bisim(&a, &hyp, 5).unwrap());
    }

    #[test]
    fn single_state_target_needs_no_tree() {
        let alphabet = Alphabet::new(["a", "b"]).unwrap();
        let d = Distribution::new(vec![0.2, 0.5, 0.3]).unwrap();
        let target = Pdfa::single_state(alphabet, d.clone()).unwrap();
        let mut teacher = PdfaTeacher::new(target);
        let mut learner = QuantLearner::new(&mut teacher, 10).unwrap();
        let out = learner.run().unwrap();
        assert_eq!(out.pdfa.num_states(), 1);
        assert!(out.tree.is_none());
        assert_eq!(out.structure_size(), 0);
        assert_eq!(out.pdfa.dist(0), &d);
    }

    #[test]
    fn initialize_tree_rejects_bogus_counterexample() {
        // With κ=1 every distribution shares the single cell, so no string
        // can be a counterexample at the root.
        let t = fixtures::weighted_tomita2();
        let gamma = w(&t, "0");
        let mut teacher = PdfaTeacher::new(t);
        let mut learner = QuantLearner::new(&mut teacher, 1).unwrap();
        let err = learner.initialize_tree(&gamma).unwrap_err();
        assert!(err.is_contract_violation());
    }

    #[test]
    fn process_counterexample_rejects_non_counterexample() {
        let t = fixtures::weighted_tomita2();
        let mut teacher = PdfaTeacher::new(t.clone());
        let mut learner = QuantLearner::new(&mut teacher, 10).unwrap();
        let out = learner.run().unwrap();
        let hyp = out.pdfa.clone();
        learner.tree = Some(out.tree.unwrap());
        // The final hypothesis is equivalent: no string is genuine.
        let err = learner
            .process_counterexample(&w(&t, "0101"), &hyp)
            .unwrap_err();
        assert!(err.is_contract_violation());
    }

    #[test]
    fn leaf_history_is_strictly_monotone() {
        let t = fixtures::ab_cycle_large();
        let mut teacher = PdfaTeacher::new(t);
        let mut learner = QuantLearner::new(&mut teacher, 100).unwrap();
        let out = learner.run().unwrap();
        assert!(!out.leaf_history.is_empty());
        for pair in out.leaf_history.windows(2) {
            assert!(pair[0] < pair[1], "leaf counts must strictly increase");
        }
    }

    #[test]
    fn dump_lists_nodes_arcs_and_leaves() {
        let t = fixtures::weighted_tomita2();
        let (_, tree) = learned_tomita2();
        let dump = tree.dump(t.alphabet());
        assert!(dump.starts_with("D λ\n"));
        assert!(dump.contains("[(0, 5, 5)]"));
        assert!(dump.contains("A λ (0, 0.5, 0.5)"));
        assert!(dump.contains("[(1, 6, 3)]"));
        let d_lines = dump.lines().filter(|l| l.trim_start().starts_with("D ")).count();
        let a_lines = dump.lines().filter(|l| l.trim_start().starts_with("A ")).count();
        assert_eq!(d_lines, 2);
        assert_eq!(a_lines, 4);
    }
}
