//! The observation-table baseline learner.
//!
//! Prefix rows are split into RED (state-forming) and BLUE (one-symbol
//! continuations of RED); columns are suffixes in `{$} ∪ Σ⁺` and a cell holds
//! the probability of the last symbol of `prefix · suffix`. Rows are compared
//! with tolerance `t` per column. Because `t`-equality is not transitive,
//! states are formed by greedily clustering RED rows; coverage and a
//! signature-splitting refinement then make the transition relation
//! deterministic. The column-expansion variant feeds counterexample suffixes
//! into the columns instead of prefixes into RED, which keeps RED rows
//! pairwise `t`-far and makes clustering degenerate to singletons.

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::alphabet::{Alphabet, Sym, Word};
use crate::automaton::Pdfa;
use crate::distribution::Distribution;
use crate::error::{Error, Result};
use crate::teacher::{Comparator, Teacher};

/// A table column: a word over Σ optionally ending with the terminal.
/// Nonempty by invariant: `terminal` or `word` holds at least one symbol.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Suffix {
    pub word: Word,
    pub terminal: bool,
}

impl Suffix {
    pub fn dollar() -> Self {
        Suffix {
            word: Vec::new(),
            terminal: true,
        }
    }

    pub fn symbol(sym: Sym) -> Self {
        Suffix {
            word: vec![sym],
            terminal: false,
        }
    }

    pub fn from_word(word: Word) -> Self {
        debug_assert!(!word.is_empty(), "suffixes are nonempty");
        Suffix {
            word,
            terminal: false,
        }
    }

    pub fn prepend(&self, sym: Sym) -> Self {
        let mut word = Vec::with_capacity(self.word.len() + 1);
        word.push(sym);
        word.extend_from_slice(&self.word);
        Suffix {
            word,
            terminal: self.terminal,
        }
    }

    pub fn format(&self, alphabet: &Alphabet) -> String {
        let mut s = if self.word.is_empty() {
            String::new()
        } else {
            alphabet.format_word(&self.word)
        };
        if self.terminal {
            s.push('$');
        }
        s
    }
}

/// The observation table.
#[derive(Debug, Clone)]
pub struct ObservationTable {
    alphabet: Alphabet,
    tolerance: f64,
    red: Vec<Word>,
    red_index: HashMap<Word, usize>,
    blue: Vec<Word>,
    blue_set: HashSet<Word>,
    suffixes: Vec<Suffix>,
    suffix_set: HashSet<Suffix>,
    rows: HashMap<Word, Vec<f64>>,
}

impl ObservationTable {
    /// Fresh table: `RED = {λ}`, `BLUE = Σ`, columns `{$} ∪ Σ`.
    pub fn new<T: Teacher>(teacher: &mut T, tolerance: f64) -> Result<Self> {
        let alphabet = teacher.alphabet().clone();
        let mut suffixes = vec![Suffix::dollar()];
        suffixes.extend(alphabet.symbols().map(Suffix::symbol));
        ObservationTable::with_suffixes(teacher, tolerance, suffixes)
    }

    fn with_suffixes<T: Teacher>(
        teacher: &mut T,
        tolerance: f64,
        suffixes: Vec<Suffix>,
    ) -> Result<Self> {
        if !(0.0..=1.0).contains(&tolerance) {
            return Err(Error::OutOfRange(tolerance));
        }
        let alphabet = teacher.alphabet().clone();
        let mut table = ObservationTable {
            alphabet: alphabet.clone(),
            tolerance,
            red: Vec::new(),
            red_index: HashMap::new(),
            blue: Vec::new(),
            blue_set: HashSet::new(),
            suffix_set: suffixes.iter().cloned().collect(),
            suffixes,
            rows: HashMap::new(),
        };
        table.push_red(Vec::new());
        for sym in alphabet.symbols() {
            table.push_blue(vec![sym]);
        }
        table.fill(teacher)?;
        Ok(table)
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn red(&self) -> &[Word] {
        &self.red
    }

    pub fn blue(&self) -> &[Word] {
        &self.blue
    }

    pub fn suffixes(&self) -> &[Suffix] {
        &self.suffixes
    }

    /// Total number of cells, the learner's structure size.
    pub fn cell_count(&self) -> usize {
        (self.red.len() + self.blue.len()) * self.suffixes.len()
    }

    fn push_red(&mut self, p: Word) {
        self.red_index.insert(p.clone(), self.red.len());
        self.red.push(p);
    }

    fn push_blue(&mut self, p: Word) {
        if !self.red_index.contains_key(&p) && self.blue_set.insert(p.clone()) {
            self.blue.push(p);
        }
    }

    pub fn is_red(&self, p: &[Sym]) -> bool {
        self.red_index.contains_key(p)
    }

    pub fn is_blue(&self, p: &[Sym]) -> bool {
        self.blue_set.contains(p)
    }

    /// Row of a prefix over the current columns; cells were filled eagerly by
    /// [`ObservationTable::fill`].
    pub fn row(&self, p: &[Sym]) -> &[f64] {
        &self.rows[p]
    }

    fn t_equal(&self, a: &[f64], b: &[f64]) -> bool {
        a.iter().zip(b).all(|(x, y)| (x - y).abs() <= self.tolerance)
    }

    pub fn rows_t_equal(&self, p: &[Sym], q: &[Sym]) -> bool {
        self.t_equal(self.row(p), self.row(q))
    }

    /// Asks the teacher for every missing cell, in deterministic order.
    pub fn fill<T: Teacher>(&mut self, teacher: &mut T) -> Result<()> {
        let prefixes: Vec<Word> = self.red.iter().chain(self.blue.iter()).cloned().collect();
        for p in prefixes {
            let have = self.rows.get(&p).map_or(0, Vec::len);
            if have == self.suffixes.len() {
                continue;
            }
            let mut row = self.rows.remove(&p).unwrap_or_default();
            for k in have..self.suffixes.len() {
                let suffix = self.suffixes[k].clone();
                let mut query = p.clone();
                query.extend_from_slice(&suffix.word);
                let value = if suffix.terminal {
                    teacher.mq_last_symbol(&query, None)?
                } else {
                    let last = query.pop().expect("suffixes are nonempty");
                    teacher.mq_last_symbol(&query, Some(last))?
                };
                row.push(value);
            }
            self.rows.insert(p, row);
        }
        Ok(())
    }

    /// First BLUE row (in order) that is `t`-far from every RED row.
    pub fn check_closed(&self) -> Option<&Word> {
        self.blue
            .iter()
            .find(|b| !self.red.iter().any(|r| self.rows_t_equal(b, r)))
    }

    /// First pair of `t`-equal RED rows whose σ-continuations drift apart, as
    /// `(p, p', σ, column index)` in deterministic scan order. The caller
    /// fixes the violation by adding the column `σ · suffix[index]`.
    pub fn check_consistent(&self) -> Option<(&Word, &Word, Sym, usize)> {
        for i in 0..self.red.len() {
            for j in i + 1..self.red.len() {
                if !self.rows_t_equal(&self.red[i], &self.red[j]) {
                    continue;
                }
                for sym in self.alphabet.symbols() {
                    let mut pi = self.red[i].clone();
                    pi.push(sym);
                    let mut pj = self.red[j].clone();
                    pj.push(sym);
                    let (ri, rj) = (self.row(&pi), self.row(&pj));
                    for (k, (x, y)) in ri.iter().zip(rj).enumerate() {
                        if (x - y).abs() > self.tolerance {
                            return Some((&self.red[i], &self.red[j], sym, k));
                        }
                    }
                }
            }
        }
        None
    }

    /// Moves a BLUE row to RED and feeds its continuations into BLUE.
    fn promote<T: Teacher>(&mut self, p: Word, teacher: &mut T) -> Result<()> {
        if let Some(pos) = self.blue.iter().position(|b| *b == p) {
            self.blue.remove(pos);
            self.blue_set.remove(&p);
        }
        self.push_red(p.clone());
        for sym in self.alphabet.symbols() {
            let mut cont = p.clone();
            cont.push(sym);
            self.push_blue(cont);
        }
        self.fill(teacher)
    }

    fn add_suffix<T: Teacher>(&mut self, suffix: Suffix, teacher: &mut T) -> Result<bool> {
        if !self.suffix_set.insert(suffix.clone()) {
            return Ok(false);
        }
        self.suffixes.push(suffix);
        self.fill(teacher)?;
        Ok(true)
    }

    /// Expands until closed (and, unless `skip_consistency`, consistent):
    /// closedness violations promote the offending BLUE row, consistency
    /// violations add the witnessing extended suffix `σ·s` as a column.
    pub fn expand<T: Teacher>(&mut self, teacher: &mut T, skip_consistency: bool) -> Result<()> {
        loop {
            if let Some(b) = self.check_closed() {
                let b = b.clone();
                self.promote(b, teacher)?;
                continue;
            }
            if !skip_consistency {
                if let Some((_, _, sym, k)) = self.check_consistent() {
                    let witness = self.suffixes[k].prepend(sym);
                    self.add_suffix(witness, teacher)?;
                    continue;
                }
            }
            return Ok(());
        }
    }

    /// Adds every prefix of `gamma` to RED (with continuations into BLUE).
    /// Returns whether the table changed.
    pub fn handle_counterexample<T: Teacher>(
        &mut self,
        gamma: &[Sym],
        teacher: &mut T,
    ) -> Result<bool> {
        let mut changed = false;
        for i in 0..=gamma.len() {
            let p = gamma[..i].to_vec();
            if !self.is_red(&p) {
                self.promote(p, teacher)?;
                changed = true;
            }
        }
        Ok(changed)
    }

    /// Adds every nonempty suffix of `gamma` as a column. Returns whether the
    /// table changed.
    pub fn handle_counterexample_col<T: Teacher>(
        &mut self,
        gamma: &[Sym],
        teacher: &mut T,
    ) -> Result<bool> {
        let mut changed = false;
        for i in 0..gamma.len() {
            changed |= self.add_suffix(Suffix::from_word(gamma[i..].to_vec()), teacher)?;
        }
        Ok(changed)
    }

    /// Debug dump: one line per row, tab-separated, tagged RED/BLUE.
    pub fn dump_tsv(&self) -> String {
        let mut out = String::from("prefix\tkind");
        for s in &self.suffixes {
            out.push('\t');
            out.push_str(&s.format(&self.alphabet));
        }
        out.push('\n');
        for (kind, rows) in [("RED", &self.red), ("BLUE", &self.blue)] {
            for p in rows.iter() {
                out.push_str(&self.alphabet.format_word(p));
                out.push('\t');
                out.push_str(kind);
                for v in self.row(p) {
                    out.push_str(&format!("\t{v}"));
                }
                out.push('\n');
            }
        }
        out
    }
}

/// Grouping of RED rows into hypothesis states.
#[derive(Debug, Clone)]
pub struct RowPartition {
    /// Cluster of each RED row, by row index.
    pub cluster_of: Vec<usize>,
    /// Mean row of each cluster.
    pub centroids: Vec<Vec<f64>>,
    /// RED row indices per cluster.
    pub members: Vec<Vec<usize>>,
}

impl RowPartition {
    pub fn num_clusters(&self) -> usize {
        self.centroids.len()
    }
}

fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn centroid_of(table: &ObservationTable, members: &[usize]) -> Vec<f64> {
    let dim = table.suffixes().len();
    let mut c = vec![0.0; dim];
    for &i in members {
        for (acc, v) in c.iter_mut().zip(table.row(&table.red()[i])) {
            *acc += v;
        }
    }
    for acc in &mut c {
        *acc /= members.len() as f64;
    }
    c
}

/// Greedy clustering of RED rows: a row joins a cluster only when `t`-equal
/// to **all** of its members; among several such clusters the closest
/// centroid (lowest id on ties) wins; otherwise it opens a new cluster.
pub fn greedy_cluster(table: &ObservationTable) -> RowPartition {
    let mut partition = RowPartition {
        cluster_of: Vec::with_capacity(table.red().len()),
        centroids: Vec::new(),
        members: Vec::new(),
    };
    for (i, p) in table.red().iter().enumerate() {
        let row = table.row(p);
        let mut best: Option<(usize, f64)> = None;
        for (c, members) in partition.members.iter().enumerate() {
            let all_equal = members
                .iter()
                .all(|&j| table.t_equal(row, table.row(&table.red()[j])));
            if !all_equal {
                continue;
            }
            let d = squared_distance(row, &partition.centroids[c]);
            if best.map_or(true, |(_, bd)| d < bd) {
                best = Some((c, d));
            }
        }
        match best {
            Some((c, _)) => {
                partition.members[c].push(i);
                partition.cluster_of.push(c);
                partition.centroids[c] = centroid_of(table, &partition.members[c]);
            }
            None => {
                partition.cluster_of.push(partition.members.len());
                partition.members.push(vec![i]);
                partition.centroids.push(row.to_vec());
            }
        }
    }
    partition
}

/// Target cluster chosen by one RED row for one symbol: the continuation's
/// own cluster when it is RED, else the qualifying cluster (some member
/// `t`-equal to the continuation row) with the closest centroid.
fn row_target(
    table: &ObservationTable,
    g: &RowPartition,
    red_idx: usize,
    sym: Sym,
) -> Result<usize> {
    let mut cont = table.red()[red_idx].clone();
    cont.push(sym);
    if let Some(&idx) = table.red_index.get(&cont) {
        return Ok(g.cluster_of[idx]);
    }
    let row = table.row(&cont);
    let mut best: Option<(usize, f64)> = None;
    for (c, members) in g.members.iter().enumerate() {
        let qualifies = members
            .iter()
            .any(|&j| table.t_equal(row, table.row(&table.red()[j])));
        if !qualifies {
            continue;
        }
        let d = squared_distance(row, &g.centroids[c]);
        if best.map_or(true, |(_, bd)| d < bd) {
            best = Some((c, d));
        }
    }
    best.map(|(c, _)| c).ok_or_else(|| {
        Error::ContractViolation("table is not closed: continuation matches no cluster".into())
    })
}

/// The raw transition relation `R ⊆ G × Σ × G` accumulated over all RED rows.
pub fn add_transitions(
    table: &ObservationTable,
    g: &RowPartition,
) -> Result<Vec<Vec<BTreeSet<usize>>>> {
    let m = table.alphabet.len();
    let mut relation = vec![vec![BTreeSet::new(); m]; g.num_clusters()];
    for i in 0..table.red().len() {
        for sym in table.alphabet.symbols() {
            let target = row_target(table, g, i, sym)?;
            relation[g.cluster_of[i]][sym].insert(target);
        }
    }
    Ok(relation)
}

/// Splits clusters by per-row transition signatures until the relation is
/// deterministic. Returns the refined partition and, per cluster and symbol,
/// the unique target.
pub fn refine_to_deterministic(
    table: &ObservationTable,
    g: &RowPartition,
) -> Result<(RowPartition, Vec<Vec<usize>>)> {
    let mut g = g.clone();
    loop {
        let signatures: Vec<Vec<usize>> = (0..table.red().len())
            .map(|i| {
                table
                    .alphabet
                    .symbols()
                    .map(|sym| row_target(table, &g, i, sym))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;

        let mut ids: HashMap<(usize, &[usize]), usize> = HashMap::new();
        let mut cluster_of = Vec::with_capacity(table.red().len());
        for i in 0..table.red().len() {
            let key = (g.cluster_of[i], signatures[i].as_slice());
            let next = ids.len();
            let id = *ids.entry(key).or_insert(next);
            cluster_of.push(id);
        }
        let count = ids.len();
        if count == g.num_clusters() {
            let mut targets = vec![Vec::new(); count];
            for i in 0..table.red().len() {
                if targets[g.cluster_of[i]].is_empty() {
                    targets[g.cluster_of[i]] = signatures[i].clone();
                }
                debug_assert_eq!(targets[g.cluster_of[i]], signatures[i]);
            }
            return Ok((g, targets));
        }
        let mut members = vec![Vec::new(); count];
        for (i, &c) in cluster_of.iter().enumerate() {
            members[c].push(i);
        }
        let centroids = members.iter().map(|ms| centroid_of(table, ms)).collect();
        g = RowPartition {
            cluster_of,
            centroids,
            members,
        };
    }
}

/// Builds the hypothesis from a closed and consistent table: states are the
/// refined clusters, the distribution of a state is its centroid restricted
/// to the `{$} ∪ Σ` columns and renormalized, transitions follow the
/// determinized relation. Unreachable clusters are trimmed.
pub fn build_hypothesis_lp(table: &ObservationTable) -> Result<Pdfa> {
    let m = table.alphabet.len();
    // The first m+1 columns must be exactly $ and the one-symbol suffixes.
    let short_ok = table.suffixes().len() > m
        && table.suffixes()[0] == Suffix::dollar()
        && table
            .alphabet
            .symbols()
            .all(|sym| table.suffixes()[sym + 1] == Suffix::symbol(sym));
    if !short_ok {
        return Err(Error::Config(
            "table columns must start with $ and the one-symbol suffixes".into(),
        ));
    }

    let initial_partition = greedy_cluster(table);
    let (g, targets) = refine_to_deterministic(table, &initial_partition)?;

    let dists = g
        .centroids
        .iter()
        .map(|centroid| {
            let short = &centroid[..=m];
            let sum: f64 = short.iter().sum();
            if sum <= 0.0 {
                return Err(Error::Config(
                    "cluster centroid has no probability mass on {$} ∪ Σ".into(),
                ));
            }
            Distribution::new(short.iter().map(|v| v / sum).collect())
        })
        .collect::<Result<Vec<_>>>()?;

    let lambda: Word = Vec::new();
    let initial = g.cluster_of[table.red_index[&lambda]];

    // Keep only clusters reachable from the initial one, in BFS order.
    let mut number: HashMap<usize, usize> = HashMap::new();
    let mut order = Vec::new();
    number.insert(initial, 0);
    order.push(initial);
    let mut head = 0;
    while head < order.len() {
        let c = order[head];
        head += 1;
        for sym in table.alphabet.symbols() {
            let t = targets[c][sym];
            if !number.contains_key(&t) {
                number.insert(t, order.len());
                order.push(t);
            }
        }
    }
    let states = order
        .iter()
        .map(|&c| {
            let trans = table
                .alphabet
                .symbols()
                .map(|sym| number[&targets[c][sym]])
                .collect();
            (dists[c].clone(), trans)
        })
        .collect();
    Pdfa::new(table.alphabet.clone(), 0, states)
}

/// Which table dimension counterexamples grow.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpstarVariant {
    /// Counterexample prefixes become RED rows; consistency is checked.
    RowExpansion,
    /// Counterexample suffixes become columns; consistency holds by
    /// construction and is skipped.
    ColumnExpansion,
}

/// Outcome of a learning run.
pub struct LpstarOutcome {
    pub pdfa: Pdfa,
    pub table: ObservationTable,
    /// Equivalence queries asked.
    pub rounds: usize,
}

impl LpstarOutcome {
    pub fn structure_size(&self) -> usize {
        self.table.cell_count()
    }
}

/// The expand → build → equivalence loop.
pub fn run_lpstar<T: Teacher>(
    teacher: &mut T,
    tolerance: f64,
    variant: LpstarVariant,
) -> Result<LpstarOutcome> {
    let mut table = ObservationTable::new(teacher, tolerance)?;
    let skip_consistency = variant == LpstarVariant::ColumnExpansion;
    let mut rounds = 0;
    loop {
        table.expand(teacher, skip_consistency)?;
        let hyp = build_hypothesis_lp(&table)?;
        rounds += 1;
        match teacher.eq(&hyp, Comparator::Tolerance(tolerance))? {
            None => {
                return Ok(LpstarOutcome {
                    pdfa: hyp,
                    table,
                    rounds,
                })
            }
            Some(ce) => {
                let changed = match variant {
                    LpstarVariant::RowExpansion => {
                        table.handle_counterexample(&ce.gamma, teacher)?
                    }
                    LpstarVariant::ColumnExpansion => {
                        table.handle_counterexample_col(&ce.gamma, teacher)?
                    }
                };
                // An unchanged table would reproduce the same hypothesis and
                // the same counterexample forever.
                if !changed {
                    return Err(Error::Stalled(format!(
                        "counterexample {} did not grow the table",
                        ce.format(teacher.alphabet())
                    )));
                }
            }
        }
    }
}

/// Row-expansion learner.
pub fn learn_lpstar<T: Teacher>(teacher: &mut T, tolerance: f64) -> Result<Pdfa> {
    Ok(run_lpstar(teacher, tolerance, LpstarVariant::RowExpansion)?.pdfa)
}

/// Column-expansion learner.
pub fn learn_lpstar_col<T: Teacher>(teacher: &mut T, tolerance: f64) -> Result<Pdfa> {
    Ok(run_lpstar(teacher, tolerance, LpstarVariant::ColumnExpansion)?.pdfa)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::teacher::{eq_tolerance, Counterexample, PdfaTeacher};

    fn w(p: &Pdfa, text: &str) -> Word {
        p.alphabet().parse_word(text).unwrap()
    }

    #[test]
    fn initial_rows_read_the_target() {
        let t = fixtures::weighted_tomita2();
        let mut teacher = PdfaTeacher::new(t.clone());
        let table = ObservationTable::new(&mut teacher, 0.01).unwrap();
        // Row of λ over {$, 0, 1} is exactly the initial distribution.
        assert_eq!(table.row(&[]), &[0.0, 0.5, 0.5]);
        assert_eq!(table.suffixes().len(), 3);
        assert_eq!(table.red().len(), 1);
        assert_eq!(table.blue().len(), 2);
        assert_eq!(table.cell_count(), 9);
    }

    #[test]
    fn row_over_terminal_only_column() {
        let t = fixtures::weighted_tomita2();
        let mut teacher = PdfaTeacher::new(t.clone());
        let table =
            ObservationTable::with_suffixes(&mut teacher, 0.01, vec![Suffix::dollar()]).unwrap();
        assert_eq!(table.row(&w(&t, "1")), &[0.1]);
        assert_eq!(table.row(&[]), &[0.0]);
    }

    #[test]
    fn closedness_depends_on_tolerance() {
        let t = fixtures::weighted_tomita2();
        let mut teacher = PdfaTeacher::new(t.clone());
        // Columns {$} only: rows are (0) for λ and (0.1) for both blues.
        let table =
            ObservationTable::with_suffixes(&mut teacher, 0.01, vec![Suffix::dollar()]).unwrap();
        assert_eq!(table.check_closed(), Some(&w(&t, "0")));

        let mut teacher = PdfaTeacher::new(t.clone());
        let table =
            ObservationTable::with_suffixes(&mut teacher, 0.2, vec![Suffix::dollar()]).unwrap();
        assert_eq!(table.check_closed(), None);
    }

    #[test]
    fn consistency_is_vacuous_without_equal_rows() {
        let t = fixtures::weighted_tomita2();
        let mut teacher = PdfaTeacher::new(t);
        let table = ObservationTable::new(&mut teacher, 1e-3).unwrap();
        // Single RED row: vacuously consistent.
        assert!(table.check_consistent().is_none());
    }

    #[test]
    fn consistency_violation_yields_witness() {
        // The after-0 and after-10 states of the tomita2 automaton share a
        // distribution, so their rows over {$} ∪ Σ are equal, but reading 1
        // from them drifts apart: πℓ(0·11) = 0.3 vs πℓ(10·11) = 0.6? No —
        // continuations land on states with swapped 0/1 weights.
        let t = fixtures::weighted_tomita2();
        let mut teacher = PdfaTeacher::new(t.clone());
        let mut table = ObservationTable::new(&mut teacher, 1e-3).unwrap();
        for text in ["0", "10"] {
            table.promote(w(&t, text), &mut teacher).unwrap();
        }
        let (p, q, sym, k) = table.check_consistent().expect("violation");
        let (p, q) = (p.clone(), q.clone());
        assert_eq!((p.clone(), q.clone()), (w(&t, "0"), w(&t, "10")));
        // Adding the witness column separates the two rows.
        let witness = table.suffixes()[k].prepend(sym);
        table.add_suffix(witness, &mut teacher).unwrap();
        assert!(!table.rows_t_equal(&p, &q));
    }

    #[test]
    fn expand_reaches_closed_and_consistent() {
        let t = fixtures::weighted_tomita2();
        let mut teacher = PdfaTeacher::new(t.clone());
        let mut table = ObservationTable::new(&mut teacher, 0.01).unwrap();
        table.expand(&mut teacher, false).unwrap();
        assert!(table.check_closed().is_none());
        assert!(table.check_consistent().is_none());
        assert!(table.red().len() >= 3);
        // Brute-force recheck of both conditions over every pair and column.
        for b in table.blue() {
            assert!(table.red().iter().any(|r| table.rows_t_equal(b, r)));
        }
        for (i, p) in table.red().iter().enumerate() {
            for q in &table.red()[i + 1..] {
                if table.rows_t_equal(p, q) {
                    for sym in t.alphabet().symbols() {
                        let (mut pc, mut qc) = (p.clone(), q.clone());
                        pc.push(sym);
                        qc.push(sym);
                        assert!(table.rows_t_equal(&pc, &qc));
                    }
                }
            }
        }
    }

    /// Builds a table over the unary alphabet with hand-written row values.
    fn toy_table(tolerance: f64, reds: &[(&str, f64)]) -> (ObservationTable, Pdfa) {
        let t = fixtures::unary_geometric();
        let mut teacher = PdfaTeacher::new(t.clone());
        let mut table =
            ObservationTable::with_suffixes(&mut teacher, tolerance, vec![Suffix::dollar()])
                .unwrap();
        for (text, _) in &reds[1..] {
            table.promote(w(&t, text), &mut teacher).unwrap();
        }
        for (text, value) in reds {
            table.rows.insert(w(&t, text), vec![*value]);
        }
        (table, t)
    }

    #[test]
    fn greedy_cluster_requires_t_equality_with_all_members() {
        let (table, _) = toy_table(0.06, &[("", 0.0), ("a", 0.05), ("aa", 0.10)]);
        let g = greedy_cluster(&table);
        // The third row is t-equal to the second but not the first, so the
        // all-members rule forces a fresh cluster.
        assert_eq!(g.cluster_of, vec![0, 0, 1]);
        assert_eq!(g.centroids[0], vec![0.025]);
    }

    #[test]
    fn greedy_cluster_breaks_distance_ties_by_lowest_id() {
        let (table, _) = toy_table(0.06, &[("", 0.0), ("a", 0.1), ("aa", 0.05)]);
        // Rows 1 and 2 are t-far: singleton clusters. Row 3 qualifies for
        // both at centroid distance 0.05 each; the tie goes to cluster 0.
        let g = greedy_cluster(&table);
        assert_eq!(g.cluster_of, vec![0, 1, 0]);
    }

    #[test]
    fn all_rows_far_apart_gives_one_cluster_each() {
        let (table, _) = toy_table(0.01, &[("", 0.0), ("a", 0.3), ("aa", 0.9)]);
        let g = greedy_cluster(&table);
        assert_eq!(g.cluster_of, vec![0, 1, 2]);
    }

    #[test]
    fn transitions_cover_every_cluster_and_symbol() {
        let t = fixtures::weighted_tomita2();
        let mut teacher = PdfaTeacher::new(t.clone());
        let mut table = ObservationTable::new(&mut teacher, 1e-3).unwrap();
        table.expand(&mut teacher, false).unwrap();
        let g = greedy_cluster(&table);
        let relation = add_transitions(&table, &g).unwrap();
        for (c, by_sym) in relation.iter().enumerate() {
            for (sym, targets) in by_sym.iter().enumerate() {
                assert!(!targets.is_empty(), "no target for cluster {c} on {sym}");
            }
        }
    }

    #[test]
    fn refinement_splits_nondeterministic_cluster() {
        // λ and "a" share a cluster at t=0.06 but transition to different
        // clusters, so determinization must split them apart.
        let (mut table, target) = toy_table(0.06, &[("", 0.0), ("a", 0.04), ("aa", 0.5)]);
        table.rows.insert(w(&target, "aaa"), vec![0.54]);
        let g = greedy_cluster(&table);
        assert_eq!(g.cluster_of, vec![0, 0, 1]);
        let relation = add_transitions(&table, &g).unwrap();
        assert_eq!(relation[0][0].len(), 2, "cluster 0 is nondeterministic");
        let (refined, targets) = refine_to_deterministic(&table, &g).unwrap();
        assert_eq!(refined.num_clusters(), 3);
        assert!(targets.iter().all(|t| t.len() == 1));
        // Splitting never merges: every refined cluster sits inside one of
        // the original clusters.
        for ms in &refined.members {
            let orig: HashSet<usize> = ms.iter().map(|&i| g.cluster_of[i]).collect();
            assert_eq!(orig.len(), 1);
        }
    }

    #[test]
    fn already_deterministic_refinement_is_identity() {
        let t = fixtures::weighted_tomita2();
        let mut teacher = PdfaTeacher::new(t.clone());
        let mut table = ObservationTable::new(&mut teacher, 1e-3).unwrap();
        table.expand(&mut teacher, false).unwrap();
        let g = greedy_cluster(&table);
        let (refined, _) = refine_to_deterministic(&table, &g).unwrap();
        assert_eq!(refined.num_clusters(), g.num_clusters());
        assert_eq!(refined.cluster_of, g.cluster_of);
    }

    #[test]
    fn single_state_target_is_learned_exactly() {
        let alphabet = Alphabet::new(["x", "y"]).unwrap();
        let d = Distribution::new(vec![0.25, 0.5, 0.25]).unwrap();
        let target = Pdfa::single_state(alphabet, d.clone()).unwrap();
        let mut teacher = PdfaTeacher::new(target);
        let out = run_lpstar(&mut teacher, 1e-3, LpstarVariant::RowExpansion).unwrap();
        assert_eq!(out.pdfa.num_states(), 1);
        assert_eq!(out.rounds, 1);
        assert_eq!(teacher.eq_count(), 1);
        // Singleton cluster centroid, restricted and renormalized, is exact
        // up to the division round-off.
        for pos in 0..3 {
            assert!((out.pdfa.dist(0).layout(pos) - d.layout(pos)).abs() < 1e-12);
        }
    }

    #[test]
    fn learns_tomita2_with_row_expansion() {
        let t = fixtures::weighted_tomita2();
        let mut teacher = PdfaTeacher::new(t.clone());
        let out = run_lpstar(&mut teacher, 1e-3, LpstarVariant::RowExpansion).unwrap();
        assert_eq!(out.pdfa.num_states(), 4);
        assert!(eq_tolerance(&t, &out.pdfa, 1e-3).unwrap().is_none());
    }

    #[test]
    fn learns_tomita2_with_column_expansion() {
        let t = fixtures::weighted_tomita2();
        let mut teacher = PdfaTeacher::new(t.clone());
        let out = run_lpstar(&mut teacher, 1e-3, LpstarVariant::ColumnExpansion).unwrap();
        assert!(eq_tolerance(&t, &out.pdfa, 1e-3).unwrap().is_none());
        // RED rows stay pairwise t-far, so clustering is one row per state.
        let table = &out.table;
        for (i, p) in table.red().iter().enumerate() {
            for q in &table.red()[i + 1..] {
                assert!(!table.rows_t_equal(p, q));
            }
        }
        let g = greedy_cluster(table);
        assert!(g.members.iter().all(|ms| ms.len() == 1));
    }

    #[test]
    fn learns_unary_chain() {
        let a = fixtures::unary_geometric();
        let mut teacher = PdfaTeacher::new(a.clone());
        let hyp = learn_lpstar(&mut teacher, 0.1).unwrap();
        assert_eq!(hyp.num_states(), 2);
        assert!(eq_tolerance(&a, &hyp, 0.1).unwrap().is_none());
    }

    #[test]
    fn counterexample_prefixes_become_red() {
        let t = fixtures::ab_cycle_small();
        let mut teacher = PdfaTeacher::new(t.clone());
        let mut table = ObservationTable::new(&mut teacher, 1e-3).unwrap();
        let gamma = w(&t, "ab");
        assert!(table.handle_counterexample(&gamma, &mut teacher).unwrap());
        for text in ["", "a", "ab"] {
            assert!(table.is_red(&w(&t, text)));
        }
        // All RED continuations are present.
        for p in table.red().to_vec() {
            for sym in t.alphabet().symbols() {
                let mut cont = p.clone();
                cont.push(sym);
                assert!(table.is_red(&cont) || table.is_blue(&cont));
            }
        }
        // Repeating the same counterexample changes nothing; λ alone is a
        // no-op as well.
        assert!(!table.handle_counterexample(&gamma, &mut teacher).unwrap());
        assert!(!table.handle_counterexample(&[], &mut teacher).unwrap());
    }

    /// A teacher whose equivalence oracle always returns the same bogus
    /// counterexample.
    struct BrokenTeacher {
        inner: PdfaTeacher,
    }

    impl Teacher for BrokenTeacher {
        fn alphabet(&self) -> &Alphabet {
            self.inner.alphabet()
        }
        fn mq_next_symbol(&mut self, s: &[Sym]) -> Result<Distribution> {
            self.inner.mq_next_symbol(s)
        }
        fn mq_last_symbol(&mut self, prefix: &[Sym], last: Option<Sym>) -> Result<f64> {
            self.inner.mq_last_symbol(prefix, last)
        }
        fn eq(&mut self, _: &Pdfa, _: Comparator) -> Result<Option<Counterexample>> {
            Ok(Some(Counterexample { gamma: Vec::new() }))
        }
        fn mq_count(&self) -> u64 {
            self.inner.mq_count()
        }
        fn eq_count(&self) -> u64 {
            self.inner.eq_count()
        }
    }

    #[test]
    fn stalled_counterexample_is_an_error_not_a_hang() {
        let mut teacher = BrokenTeacher {
            inner: PdfaTeacher::new(fixtures::unary_geometric()),
        };
        let err = learn_lpstar(&mut teacher, 0.1).unwrap_err();
        assert!(matches!(err, Error::Stalled(_)));
        let mut teacher = BrokenTeacher {
            inner: PdfaTeacher::new(fixtures::unary_geometric()),
        };
        let err = learn_lpstar_col(&mut teacher, 0.1).unwrap_err();
        assert!(matches!(err, Error::Stalled(_)));
    }

    #[test]
    fn tsv_dump_has_one_line_per_row() {
        let t = fixtures::weighted_tomita2();
        let mut teacher = PdfaTeacher::new(t);
        let table = ObservationTable::new(&mut teacher, 0.01).unwrap();
        let dump = table.dump_tsv();
        let lines: Vec<&str> = dump.lines().collect();
        assert_eq!(lines.len(), 1 + 1 + 2);
        assert_eq!(lines[0], "prefix\tkind\t$\t0\t1");
        assert!(lines[1].starts_with("λ\tRED\t0\t0.5\t0.5"));
    }
}
