//! Exact minimum-weight set cover over a universe of at most 64 elements.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SetCoverOutcome {
    /// Indices into the input, in increasing order, and their total weight.
    Optimal { cost: usize, chosen: Vec<usize> },
    /// Some element of the universe lies in no set.
    Infeasible { element: u32 },
    /// The memo table outgrew the state budget.
    BudgetExceeded,
}

/// Minimum total weight subfamily of `sets` whose union contains
/// `universe`. Sets are bitmasks paired with weights.
///
/// Memoized recursion on the uncovered mask, always branching on the lowest
/// uncovered element. Among optimal solutions the one whose chosen indices
/// come first in branching order wins, so the result is deterministic.
pub fn min_weight_cover(universe: u64, sets: &[(u64, usize)], state_budget: usize) -> SetCoverOutcome {
    let mut rest = universe;
    while rest != 0 {
        let bit = rest & rest.wrapping_neg();
        if !sets.iter().any(|&(s, _)| s & bit != 0) {
            return SetCoverOutcome::Infeasible {
                element: bit.trailing_zeros(),
            };
        }
        rest &= !bit;
    }
    // candidates per element, cheapest first; identical masks keep the
    // cheapest, lowest-index copy
    let mut best_of: BTreeMap<u64, usize> = BTreeMap::new();
    for (i, &(s, w)) in sets.iter().enumerate() {
        let s = s & universe;
        if s == 0 {
            continue;
        }
        match best_of.get(&s) {
            Some(&j) if sets[j].1 <= w => {}
            _ => {
                best_of.insert(s, i);
            }
        }
    }
    let mut by_bit: Vec<Vec<usize>> = (0..64).map(|_| Vec::new()).collect();
    for &i in best_of.values() {
        let s = sets[i].0 & universe;
        for (b, list) in by_bit.iter_mut().enumerate() {
            if s & (1 << b) != 0 {
                list.push(i);
            }
        }
    }
    for list in &mut by_bit {
        list.sort_by_key(|&i| (sets[i].1, i));
    }
    let mut solver = Solver {
        sets,
        universe,
        by_bit,
        memo: BTreeMap::new(),
        budget: state_budget,
    };
    let Some(cost) = solver.solve(universe) else {
        return SetCoverOutcome::BudgetExceeded;
    };
    let mut chosen = Vec::new();
    let mut mask = universe;
    while mask != 0 {
        let (_, pick) = solver.memo[&mask];
        chosen.push(pick);
        mask &= !(sets[pick].0 & universe);
    }
    chosen.sort_unstable();
    SetCoverOutcome::Optimal { cost, chosen }
}

struct Solver<'a> {
    sets: &'a [(u64, usize)],
    universe: u64,
    by_bit: Vec<Vec<usize>>,
    memo: BTreeMap<u64, (usize, usize)>,
    budget: usize,
}

impl Solver<'_> {
    fn solve(&mut self, mask: u64) -> Option<usize> {
        if mask == 0 {
            return Some(0);
        }
        if let Some(&(c, _)) = self.memo.get(&mask) {
            return Some(c);
        }
        if self.memo.len() >= self.budget {
            return None;
        }
        let bit = mask.trailing_zeros() as usize;
        let mut best: Option<(usize, usize)> = None;
        for k in 0..self.by_bit[bit].len() {
            let i = self.by_bit[bit][k];
            let (s, w) = self.sets[i];
            if best.is_some_and(|(c, _)| w >= c) {
                continue;
            }
            let sub = self.solve(mask & !(s & self.universe))?;
            if best.is_none_or(|(c, _)| w + sub < c) {
                best = Some((w + sub, i));
            }
        }
        let best = best.expect("every element has a candidate");
        self.memo.insert(mask, best);
        Some(best.0)
    }
}
