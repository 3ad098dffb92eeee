//! Program-to-hardware qubit placement.
//!
//! Given a circuit's interaction profile and a reliability matrix, the
//! mapper picks an injective assignment of program qubits to hardware
//! qubits. Two objectives are supported:
//!
//! * `SumLog` maximizes the sum over all two-qubit operations (with
//!   multiplicity) of the log end-to-end reliability, plus the log readout
//!   reliability of every measured qubit. This equals maximizing the product
//!   of success probabilities under an independence assumption. Solved
//!   exactly by branch and bound for up to eight active program qubits,
//!   then by a greedy construction with pairwise-improvement local search.
//! * `MaxMin` maximizes the worst single factor. The optimum is always one
//!   of the finitely many matrix entries, so a binary search over the
//!   sorted entry set combined with an injective-embedding feasibility
//!   check (arc consistency, a bipartite matching filter, then
//!   forward-checking DFS) finds it exactly at any scale.
//!
//! All searches are deterministic: ties resolve by fixed variable and value
//! orders, never by iteration over unordered containers.

use crate::ir::InteractionProfile;
use crate::reliability::ReliabilityMatrix;
use crate::{QccError, Result};

/// Placement objective.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapObjective {
    SumLog,
    MaxMin,
}

impl MapObjective {
    pub fn name(self) -> &'static str {
        match self {
            MapObjective::SumLog => "sumlog",
            MapObjective::MaxMin => "maxmin",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "sumlog" => Some(MapObjective::SumLog),
            "maxmin" => Some(MapObjective::MaxMin),
            _ => None,
        }
    }
}

/// Injective assignment of program qubits to hardware qubits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mapping {
    pub prog_to_hw: Vec<usize>,
}

impl Mapping {
    pub fn hw(&self, prog: usize) -> usize {
        self.prog_to_hw[prog]
    }

    pub fn num_prog_qubits(&self) -> usize {
        self.prog_to_hw.len()
    }
}

/// A mapping together with its canonical objective score.
#[derive(Debug, Clone)]
pub struct MapResult {
    pub mapping: Mapping,
    pub score: f64,
}

/// The identity placement: program qubit `q` on hardware qubit `q`.
pub fn trivial_map(num_prog_qubits: usize) -> Mapping {
    Mapping {
        prog_to_hw: (0..num_prog_qubits).collect(),
    }
}

/// Scores accumulate in 2^-80 fixed-point units. Each log-domain addend is
/// rounded to an integer once and the integers sum exactly, so a mapping's
/// score is independent of summation order and two mappings with the same
/// factor multiset score identically to the bit. That lets the search prune
/// ties eagerly while still returning the same value an exhaustive
/// enumeration finds.
const FIXED_SCALE: f64 = (1u128 << 80) as f64;

fn to_fixed(x: f64) -> i128 {
    (x * FIXED_SCALE) as i128
}

fn fixed_to_f64(v: i128) -> f64 {
    (v as f64) / FIXED_SCALE
}

fn sum_log_fixed(profile: &InteractionProfile, rm: &ReliabilityMatrix, map: &Mapping) -> i128 {
    let mut score = 0i128;
    for (&(c, t), &count) in &profile.ordered_pairs {
        score =
            score.saturating_add(to_fixed(count as f64 * rm.r2q_log(map.hw(c), map.hw(t))));
    }
    for &q in &profile.measured {
        score = score.saturating_add(to_fixed(rm.rro_log(map.hw(q))));
    }
    score
}

/// Canonical `SumLog` score of a mapping: higher is better, 0 for circuits
/// with no two-qubit operations and no measurements.
pub fn sum_log_score(profile: &InteractionProfile, rm: &ReliabilityMatrix, map: &Mapping) -> f64 {
    fixed_to_f64(sum_log_fixed(profile, rm, map))
}

/// Canonical `MaxMin` score of a mapping: the worst reliability factor,
/// 1 for circuits with no two-qubit operations and no measurements.
pub fn max_min_score(profile: &InteractionProfile, rm: &ReliabilityMatrix, map: &Mapping) -> f64 {
    let mut worst = 1.0f64;
    for &(c, t) in profile.ordered_pairs.keys() {
        worst = worst.min(rm.r2q(map.hw(c), map.hw(t)));
    }
    for &q in &profile.measured {
        worst = worst.min(rm.rro(map.hw(q)));
    }
    worst
}

fn score_of(
    objective: MapObjective,
    profile: &InteractionProfile,
    rm: &ReliabilityMatrix,
    map: &Mapping,
) -> f64 {
    match objective {
        MapObjective::SumLog => sum_log_score(profile, rm, map),
        MapObjective::MaxMin => max_min_score(profile, rm, map),
    }
}

/// Reference oracle: tries every injective assignment and keeps the best,
/// breaking ties toward the lexicographically smallest mapping vector.
/// QccErrors out when the search space exceeds ten million assignments.
pub fn exhaustive_map(
    profile: &InteractionProfile,
    rm: &ReliabilityMatrix,
    objective: MapObjective,
) -> Result<MapResult> {
    let n_p = profile.num_qubits;
    let n_h = rm.num_qubits;
    if n_p > n_h {
        return Err(QccError::Invalid(format!(
            "cannot place {} program qubits on {} hardware qubits",
            n_p, n_h
        )));
    }
    let mut space = 1u64;
    for i in 0..n_p {
        space = space.saturating_mul((n_h - i) as u64);
        if space > 10_000_000 {
            return Err(QccError::Invalid(
                "exhaustive mapping search space exceeds ten million assignments".into(),
            ));
        }
    }
    let mut best: Option<MapResult> = None;
    let mut best_key = i128::MIN;
    let mut current = vec![0usize; n_p];
    let mut used = vec![false; n_h];
    enumerate(
        0,
        n_p,
        n_h,
        &mut current,
        &mut used,
        &mut |assignment: &[usize]| {
            let map = Mapping {
                prog_to_hw: assignment.to_vec(),
            };
            let better = match objective {
                MapObjective::SumLog => {
                    let key = sum_log_fixed(profile, rm, &map);
                    let improved = best.is_none() || key > best_key;
                    if improved {
                        best_key = key;
                    }
                    improved
                }
                MapObjective::MaxMin => {
                    let score = max_min_score(profile, rm, &map);
                    match &best {
                        None => true,
                        Some(b) => score > b.score,
                    }
                }
            };
            if better {
                let score = score_of(objective, profile, rm, &map);
                best = Some(MapResult { mapping: map, score });
            }
        },
    );
    Ok(best.expect("at least one assignment exists"))
}

fn enumerate(
    depth: usize,
    n_p: usize,
    n_h: usize,
    current: &mut Vec<usize>,
    used: &mut Vec<bool>,
    visit: &mut impl FnMut(&[usize]),
) {
    if depth == n_p {
        visit(current);
        return;
    }
    for h in 0..n_h {
        if !used[h] {
            used[h] = true;
            current[depth] = h;
            enumerate(depth + 1, n_p, n_h, current, used, visit);
            used[h] = false;
        }
    }
}

/// One two-qubit interaction term: (control, target, multiplicity).
struct OpTerm {
    c: usize,
    t: usize,
    count: f64,
}

struct Instance<'a> {
    profile: &'a InteractionProfile,
    rm: &'a ReliabilityMatrix,
    n_h: usize,
    ops: Vec<OpTerm>,
    measured: Vec<bool>,
    /// Active program qubits in search order: decreasing interaction
    /// degree, ties toward the lower index.
    vars: Vec<usize>,
    /// Per variable (by position in `vars`): incident op indices and
    /// whether the variable is the control side.
    incident: Vec<Vec<(usize, bool)>>,
}

impl<'a> Instance<'a> {
    fn new(profile: &'a InteractionProfile, rm: &'a ReliabilityMatrix) -> Self {
        let n_p = profile.num_qubits;
        let n_h = rm.num_qubits;
        assert!(
            n_p <= n_h,
            "circuit needs {} qubits but the machine has {}",
            n_p,
            n_h
        );
        let ops: Vec<OpTerm> = profile
            .ordered_pairs
            .iter()
            .map(|(&(c, t), &count)| OpTerm {
                c,
                t,
                count: count as f64,
            })
            .collect();
        let mut measured = vec![false; n_p];
        for &q in &profile.measured {
            measured[q] = true;
        }
        let mut degree = vec![0usize; n_p];
        for op in &ops {
            degree[op.c] += op.count as usize;
            degree[op.t] += op.count as usize;
        }
        let mut vars: Vec<usize> = (0..n_p)
            .filter(|&q| degree[q] > 0 || measured[q])
            .collect();
        vars.sort_by(|&a, &b| degree[b].cmp(&degree[a]).then(a.cmp(&b)));
        let pos_of: Vec<Option<usize>> = {
            let mut v = vec![None; n_p];
            for (i, &q) in vars.iter().enumerate() {
                v[q] = Some(i);
            }
            v
        };
        let mut incident = vec![Vec::new(); vars.len()];
        for (i, op) in ops.iter().enumerate() {
            incident[pos_of[op.c].unwrap()].push((i, true));
            incident[pos_of[op.t].unwrap()].push((i, false));
        }
        Instance {
            profile,
            rm,
            n_h,
            ops,
            measured,
            vars,
            incident,
        }
    }

    /// Completes a partial assignment of the active qubits into a full
    /// mapping: inactive qubits take the smallest free hardware slots.
    fn complete(&self, active_assignment: &[usize]) -> Mapping {
        let n_p = self.profile.num_qubits;
        let mut prog_to_hw = vec![usize::MAX; n_p];
        let mut used = vec![false; self.n_h];
        for (i, &q) in self.vars.iter().enumerate() {
            prog_to_hw[q] = active_assignment[i];
            used[active_assignment[i]] = true;
        }
        let mut next_free = 0;
        for slot in prog_to_hw.iter_mut() {
            if *slot == usize::MAX {
                while used[next_free] {
                    next_free += 1;
                }
                *slot = next_free;
                used[next_free] = true;
            }
        }
        Mapping { prog_to_hw }
    }
}

/// Chooses a placement optimizing `objective`.
///
/// Panics if the circuit has more qubits than the machine; callers check
/// sizes before compiling.
pub fn map_qubits(
    profile: &InteractionProfile,
    rm: &ReliabilityMatrix,
    objective: MapObjective,
) -> MapResult {
    let inst = Instance::new(profile, rm);
    let mapping = match objective {
        MapObjective::SumLog => {
            if inst.vars.len() <= 8 {
                sum_log_exact(&inst)
            } else {
                sum_log_greedy(&inst)
            }
        }
        MapObjective::MaxMin => max_min_exact(&inst),
    };
    let score = score_of(objective, profile, rm, &mapping);
    MapResult { mapping, score }
}

/// Depth-first branch and bound over active-qubit placements.
///
/// The bound adds, to the exact score of fully assigned terms, a per-term
/// optimistic maximum over free slots that ignores injectivity among the
/// unassigned qubits, so it never underestimates. A branch is cut when its
/// bound fails to strictly beat the incumbent, which also makes the first
/// optimum found the one that is kept.
fn sum_log_exact(inst: &Instance) -> Mapping {
    let k = inst.vars.len();
    if k == 0 {
        return inst.complete(&[]);
    }
    let mut assign: Vec<Option<usize>> = vec![None; k];
    let mut hw_of_prog: Vec<Option<usize>> = vec![None; inst.profile.num_qubits];
    let mut used = vec![false; inst.n_h];
    let mut best_score = i128::MIN;
    let mut best: Vec<usize> = Vec::new();
    sum_log_dfs(
        inst,
        0,
        0,
        &mut assign,
        &mut hw_of_prog,
        &mut used,
        &mut best_score,
        &mut best,
    );
    inst.complete(&best)
}

#[allow(clippy::too_many_arguments)]
fn sum_log_dfs(
    inst: &Instance,
    depth: usize,
    partial: i128,
    assign: &mut Vec<Option<usize>>,
    hw_of_prog: &mut Vec<Option<usize>>,
    used: &mut Vec<bool>,
    best_score: &mut i128,
    best: &mut Vec<usize>,
) {
    if depth == inst.vars.len() {
        if partial > *best_score {
            *best_score = partial;
            *best = assign.iter().map(|a| a.unwrap()).collect();
        }
        return;
    }
    if sum_log_bound(inst, partial, hw_of_prog, used) <= *best_score {
        return;
    }
    let p = inst.vars[depth];
    // Value order: strongest immediate contribution first, ties toward the
    // lower hardware index.
    let mut candidates: Vec<(i128, usize)> = (0..inst.n_h)
        .filter(|&h| !used[h])
        .map(|h| (immediate_gain(inst, depth, h, hw_of_prog), h))
        .collect();
    candidates.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    for (gain, h) in candidates {
        assign[depth] = Some(h);
        hw_of_prog[p] = Some(h);
        used[h] = true;
        sum_log_dfs(
            inst,
            depth + 1,
            partial.saturating_add(gain),
            assign,
            hw_of_prog,
            used,
            best_score,
            best,
        );
        assign[depth] = None;
        hw_of_prog[p] = None;
        used[h] = false;
    }
}

/// Exact score contribution of placing variable `depth` on slot `h`, over
/// terms whose other side is already assigned. Each term is rounded to
/// fixed point individually, exactly as the canonical score rounds it, so
/// summing the gains along a full assignment reproduces the canonical
/// fixed-point score of that mapping.
fn immediate_gain(inst: &Instance, depth: usize, h: usize, hw_of_prog: &[Option<usize>]) -> i128 {
    let p = inst.vars[depth];
    let mut gain = 0i128;
    for &(op_idx, is_control) in &inst.incident[depth] {
        let op = &inst.ops[op_idx];
        let other = if is_control { op.t } else { op.c };
        if let Some(oh) = hw_of_prog[other] {
            let log = if is_control {
                inst.rm.r2q_log(h, oh)
            } else {
                inst.rm.r2q_log(oh, h)
            };
            gain = gain.saturating_add(to_fixed(op.count * log));
        }
    }
    if inst.measured[p] {
        gain = gain.saturating_add(to_fixed(inst.rm.rro_log(h)));
    }
    gain
}

/// Admissible upper bound on the best completion of a partial assignment.
/// Each unresolved term contributes its maximum over free slots, ignoring
/// injectivity among the unassigned qubits. Multiplying by a nonnegative
/// count and rounding to fixed point are both monotone, so taking the
/// maximum before converting still dominates every convertible term value.
fn sum_log_bound(
    inst: &Instance,
    partial: i128,
    hw_of_prog: &[Option<usize>],
    used: &[bool],
) -> i128 {
    let free: Vec<usize> = (0..inst.n_h).filter(|&h| !used[h]).collect();
    let mut bound = partial;
    for op in &inst.ops {
        match (hw_of_prog[op.c], hw_of_prog[op.t]) {
            (Some(_), Some(_)) => {}
            (Some(hc), None) => {
                let m = free
                    .iter()
                    .map(|&h| inst.rm.r2q_log(hc, h))
                    .fold(f64::NEG_INFINITY, f64::max);
                bound = bound.saturating_add(to_fixed(op.count * m));
            }
            (None, Some(ht)) => {
                let m = free
                    .iter()
                    .map(|&h| inst.rm.r2q_log(h, ht))
                    .fold(f64::NEG_INFINITY, f64::max);
                bound = bound.saturating_add(to_fixed(op.count * m));
            }
            (None, None) => {
                let mut m = f64::NEG_INFINITY;
                for &h1 in &free {
                    for &h2 in &free {
                        if h1 != h2 {
                            m = m.max(inst.rm.r2q_log(h1, h2));
                        }
                    }
                }
                bound = bound.saturating_add(to_fixed(op.count * m));
            }
        }
    }
    for &q in &inst.vars {
        if inst.measured[q] && hw_of_prog[q].is_none() {
            let m = free
                .iter()
                .map(|&h| inst.rm.rro_log(h))
                .fold(f64::NEG_INFINITY, f64::max);
            bound = bound.saturating_add(to_fixed(m));
        }
    }
    bound
}

/// Greedy construction plus pairwise-improvement local search, used when
/// the active-qubit count is too large for exact branch and bound.
fn sum_log_greedy(inst: &Instance) -> Mapping {
    let k = inst.vars.len();
    let mut hw_of_prog: Vec<Option<usize>> = vec![None; inst.profile.num_qubits];
    let mut used = vec![false; inst.n_h];
    let mut assignment = vec![0usize; k];
    for depth in 0..k {
        let mut best_h = usize::MAX;
        let mut best_gain = i128::MIN;
        for h in 0..inst.n_h {
            if used[h] {
                continue;
            }
            let gain = immediate_gain(inst, depth, h, &hw_of_prog);
            if gain > best_gain {
                best_gain = gain;
                best_h = h;
            }
        }
        assignment[depth] = best_h;
        hw_of_prog[inst.vars[depth]] = Some(best_h);
        used[best_h] = true;
    }
    let mut map = inst.complete(&assignment);
    let mut score = sum_log_fixed(inst.profile, inst.rm, &map);
    // Local search: move a qubit to a free slot or swap two qubits while it
    // strictly improves the score. Integer scores make every accepted move a
    // strict increase, so the search cannot cycle.
    for _pass in 0..64 {
        let mut improved = false;
        for p in 0..map.prog_to_hw.len() {
            for h in 0..inst.n_h {
                let cur = map.prog_to_hw[p];
                if h == cur {
                    continue;
                }
                let occupant = map.prog_to_hw.iter().position(|&x| x == h);
                let mut candidate = map.clone();
                candidate.prog_to_hw[p] = h;
                if let Some(q) = occupant {
                    candidate.prog_to_hw[q] = cur;
                }
                let s = sum_log_fixed(inst.profile, inst.rm, &candidate);
                if s > score {
                    map = candidate;
                    score = s;
                    improved = true;
                }
            }
        }
        if !improved {
            break;
        }
    }
    map
}

/// Exact `MaxMin` placement via binary search over the achievable value
/// set. The optimum is the largest matrix entry for which an injective
/// embedding exists where every used factor meets the threshold.
fn max_min_exact(inst: &Instance) -> Mapping {
    assert!(
        inst.n_h <= 128,
        "max-min mapping supports at most 128 hardware qubits"
    );
    if inst.vars.is_empty() {
        return inst.complete(&[]);
    }
    let any_measured = inst.vars.iter().any(|&q| inst.measured[q]);
    let mut values: Vec<f64> = Vec::new();
    if !inst.ops.is_empty() {
        for i in 0..inst.n_h {
            for j in 0..inst.n_h {
                if i != j {
                    values.push(inst.rm.r2q(i, j));
                }
            }
        }
    }
    if any_measured {
        for h in 0..inst.n_h {
            values.push(inst.rm.rro(h));
        }
    }
    values.sort_by(f64::total_cmp);
    values.dedup();
    // The smallest value is always feasible: every factor of any injective
    // assignment is drawn from the value set.
    let mut lo = 0usize;
    let mut hi = values.len() - 1;
    let mut best = embed_at(inst, values[lo]).expect("minimum threshold is always feasible");
    while lo < hi {
        let mid = lo + (hi - lo + 1) / 2;
        match embed_at(inst, values[mid]) {
            Some(assignment) => {
                best = assignment;
                lo = mid;
            }
            None => hi = mid - 1,
        }
    }
    inst.complete(&best)
}

/// Finds an assignment of the active qubits where every interaction meets
/// reliability `theta` and every measured qubit's readout does too, or
/// proves there is none. Domains are pruned to arc consistency, a
/// bipartite matching filter rules out globally infeasible probes, and a
/// forward-checking DFS over the most constrained variable does the rest.
fn embed_at(inst: &Instance, theta: f64) -> Option<Vec<usize>> {
    let n_h = inst.n_h;
    let k = inst.vars.len();
    let full: u128 = if n_h == 128 {
        u128::MAX
    } else {
        (1u128 << n_h) - 1
    };
    let mut out_ge = vec![0u128; n_h];
    let mut in_ge = vec![0u128; n_h];
    for i in 0..n_h {
        for j in 0..n_h {
            if i != j && inst.rm.r2q(i, j) >= theta {
                out_ge[i] |= 1 << j;
                in_ge[j] |= 1 << i;
            }
        }
    }
    let mut ro_ok = 0u128;
    for h in 0..n_h {
        if inst.rm.rro(h) >= theta {
            ro_ok |= 1 << h;
        }
    }

    let mut domains = vec![full; k];
    for (i, &q) in inst.vars.iter().enumerate() {
        if inst.measured[q] {
            domains[i] &= ro_ok;
        }
        if domains[i] == 0 {
            return None;
        }
    }
    // Arc consistency: a slot survives only while the other side of every
    // incident interaction still has a compatible distinct slot.
    let pos_of: Vec<Option<usize>> = {
        let mut v = vec![None; inst.profile.num_qubits];
        for (i, &q) in inst.vars.iter().enumerate() {
            v[q] = Some(i);
        }
        v
    };
    loop {
        let mut changed = false;
        for op in &inst.ops {
            let ci = pos_of[op.c].unwrap();
            let ti = pos_of[op.t].unwrap();
            let dc = domains[ci];
            let dt = domains[ti];
            let mut new_dc = 0u128;
            let mut bits = dc;
            while bits != 0 {
                let h = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                if out_ge[h] & dt & !(1u128 << h) != 0 {
                    new_dc |= 1 << h;
                }
            }
            let mut new_dt = 0u128;
            bits = dt;
            while bits != 0 {
                let h = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                if in_ge[h] & dc & !(1u128 << h) != 0 {
                    new_dt |= 1 << h;
                }
            }
            if new_dc == 0 || new_dt == 0 {
                return None;
            }
            if new_dc != dc {
                domains[ci] = new_dc;
                changed = true;
            }
            if new_dt != dt {
                domains[ti] = new_dt;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    if kuhn_matching(&domains, n_h) < k {
        return None;
    }

    let mut assignment = vec![usize::MAX; k];
    if embed_dfs(inst, &pos_of, &out_ge, &in_ge, &mut domains, &mut assignment, 0) {
        Some(assignment)
    } else {
        None
    }
}

fn embed_dfs(
    inst: &Instance,
    pos_of: &[Option<usize>],
    out_ge: &[u128],
    in_ge: &[u128],
    domains: &mut Vec<u128>,
    assignment: &mut Vec<usize>,
    assigned_count: usize,
) -> bool {
    let k = inst.vars.len();
    if assigned_count == k {
        return true;
    }
    // Most constrained variable first, ties toward the earlier search
    // position (higher interaction degree).
    let mut var = usize::MAX;
    let mut var_size = u32::MAX;
    for i in 0..k {
        if assignment[i] == usize::MAX {
            let size = domains[i].count_ones();
            if size < var_size {
                var_size = size;
                var = i;
            }
        }
    }
    let mut bits = domains[var];
    while bits != 0 {
        let h = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        let saved = domains.clone();
        assignment[var] = h;
        let mut dead = false;
        for i in 0..k {
            if assignment[i] == usize::MAX {
                domains[i] &= !(1u128 << h);
            }
        }
        for &(op_idx, is_control) in &inst.incident[var] {
            let op = &inst.ops[op_idx];
            let other = pos_of[if is_control { op.t } else { op.c }].unwrap();
            if assignment[other] == usize::MAX {
                domains[other] &= if is_control { out_ge[h] } else { in_ge[h] };
            }
        }
        for i in 0..k {
            if assignment[i] == usize::MAX && domains[i] == 0 {
                dead = true;
                break;
            }
        }
        // A periodic matching check catches global slot shortages that
        // forward checking alone misses.
        if !dead && assigned_count % 12 == 11 {
            let remaining: Vec<u128> = (0..k)
                .filter(|&i| assignment[i] == usize::MAX)
                .map(|i| domains[i])
                .collect();
            if kuhn_matching(&remaining, inst.n_h) < remaining.len() {
                dead = true;
            }
        }
        if !dead
            && embed_dfs(
                inst,
                pos_of,
                out_ge,
                in_ge,
                domains,
                assignment,
                assigned_count + 1,
            )
        {
            return true;
        }
        assignment[var] = usize::MAX;
        *domains = saved;
    }
    false
}

/// Size of a maximum bipartite matching from variables to their domain
/// slots (Kuhn's augmenting paths over bitset domains).
fn kuhn_matching(domains: &[u128], n_h: usize) -> usize {
    let mut slot_owner: Vec<usize> = vec![usize::MAX; n_h];
    let mut size = 0;
    for v in 0..domains.len() {
        let mut visited = 0u128;
        if kuhn_augment(v, domains, &mut slot_owner, &mut visited) {
            size += 1;
        }
    }
    size
}

fn kuhn_augment(v: usize, domains: &[u128], slot_owner: &mut [usize], visited: &mut u128) -> bool {
    let mut bits = domains[v] & !*visited;
    while bits != 0 {
        let h = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        *visited |= 1 << h;
        if slot_owner[h] == usize::MAX || kuhn_augment(slot_owner[h], domains, slot_owner, visited)
        {
            slot_owner[h] = v;
            return true;
        }
        bits &= !*visited;
    }
    false
}
