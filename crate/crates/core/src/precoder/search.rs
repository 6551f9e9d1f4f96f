use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::zf::zf_weights;
use crate::error::{Error, Result};
use crate::frontend::{phase_alphabet, quantize_phase, AnalogState, ArchitectureSpec, Variant};
use crate::linalg::{CMatrix, CVector, SmallSolver};

/// How the lens beam subset is searched.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SubsetSearch {
    /// Exhaustive up to `exhaustive_limit` subsets, greedy plus swaps beyond.
    Auto,
    Exhaustive,
    GreedySwap,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    /// Maximum full coordinate sweeps per start.
    pub max_iters: usize,
    /// Stop once a sweep improves the objective by less than this fraction.
    pub tol: f64,
    /// Extra starts from perturbed initializations.
    pub restarts: usize,
    /// Share of coordinates redrawn for a perturbed start.
    pub perturb_fraction: f64,
    /// Seed of the perturbation stream.
    pub seed: u64,
    pub subset_search: SubsetSearch,
    pub exhaustive_limit: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            max_iters: 50,
            tol: 1e-9,
            restarts: 3,
            perturb_fraction: 0.25,
            seed: 0,
            subset_search: SubsetSearch::Auto,
            exhaustive_limit: 20_000,
        }
    }
}

/// Search outcome with the objective after every sweep, for diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchTrace {
    pub state: AnalogState,
    pub objective: f64,
    /// Objective at the start and after every completed sweep of the winning
    /// start.
    pub history: Vec<f64>,
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Strict improvement with a relative dead band; ties keep the incumbent.
/// Any finite cost beats an infinite one.
fn improves(candidate: f64, incumbent: f64) -> bool {
    if incumbent.is_finite() {
        candidate < incumbent - 1e-12 * incumbent.abs()
    } else {
        candidate < incumbent
    }
}

/// How one phase coordinate maps onto a row of `A`.
enum RowModel<'a> {
    /// One phase per (antenna, chain); row m holds K independent entries.
    Full { scale: f64, k: usize },
    /// One phase per antenna feeding a single chain.
    Subarray { scale: f64, map: &'a [usize] },
    /// One phase per antenna scaling the fixed illumination row.
    Illuminated { gamma: f64, g: &'a CMatrix },
}

impl RowModel<'_> {
    fn for_spec(spec: &ArchitectureSpec) -> Option<RowModel<'_>> {
        let gamma = spec.rf.ps_amplitude();
        let n = spec.n_t as f64;
        match spec.variant {
            Variant::HadbFc => Some(RowModel::Full { scale: gamma / n.sqrt(), k: spec.n_rf }),
            Variant::HadbPc => Some(RowModel::Subarray {
                scale: gamma / (n / spec.n_rf as f64).sqrt(),
                map: spec.chain_of_element.as_deref().expect("PC spec carries its partition"),
            }),
            Variant::TaraFi | Variant::TaraSi => Some(RowModel::Illuminated {
                gamma,
                g: &spec.illumination().expect("TARA spec carries its illumination").g,
            }),
            Variant::Fd | Variant::Rl => None,
        }
    }

    fn row_of(&self, coord: usize) -> usize {
        match self {
            RowModel::Full { k, .. } => coord / k,
            _ => coord,
        }
    }

    fn fill_row(&self, m: usize, phases: &[usize], alphabet: &[Complex64], out: &mut [Complex64]) {
        match self {
            RowModel::Full { scale, k } => {
                for c in 0..*k {
                    out[c] = alphabet[phases[m * k + c]] * *scale;
                }
            }
            RowModel::Subarray { scale, map } => {
                out.iter_mut().for_each(|z| *z = ZERO);
                out[map[m]] = alphabet[phases[m]] * *scale;
            }
            RowModel::Illuminated { gamma, g } => {
                let p = alphabet[phases[m]] * *gamma;
                for (c, z) in out.iter_mut().enumerate() {
                    *z = p * g[(m, c)];
                }
            }
        }
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Goal {
    /// Minimize `‖A·(T·A)⁻¹‖²` for a square `T·A`.
    ZeroForcing,
    /// Maximize the share of `t` captured by the span of `A` (one row `t`).
    Capture,
}

/// Incremental coordinate descent over phase indices.
///
/// Keeps `P = T·A` (targets × chains) and `AᴴA` up to date so a candidate
/// move costs O(K²) plus one K×K inversion.
struct PhaseSearch<'a> {
    model: RowModel<'a>,
    targets: &'a CMatrix,
    goal: Goal,
    n: usize,
    k: usize,
    r: usize,
    alphabet: Vec<Complex64>,
    rows: Vec<Complex64>,
    p: Vec<Complex64>,
    gram: Vec<Complex64>,
    p_try: Vec<Complex64>,
    gram_try: Vec<Complex64>,
    new_row: Vec<Complex64>,
    solver: SmallSolver,
}

impl<'a> PhaseSearch<'a> {
    fn new(model: RowModel<'a>, targets: &'a CMatrix, goal: Goal, k: usize, bits: u32) -> Self {
        let (r, n) = targets.shape();
        Self {
            model,
            targets,
            goal,
            n,
            k,
            r,
            alphabet: phase_alphabet(bits),
            rows: vec![ZERO; n * k],
            p: vec![ZERO; r * k],
            gram: vec![ZERO; k * k],
            p_try: vec![ZERO; r * k],
            gram_try: vec![ZERO; k * k],
            new_row: vec![ZERO; k],
            solver: SmallSolver::new(k),
        }
    }

    fn rebuild(&mut self, phases: &[usize]) {
        let k = self.k;
        for m in 0..self.n {
            self.model.fill_row(m, phases, &self.alphabet, &mut self.new_row);
            self.rows[m * k..(m + 1) * k].copy_from_slice(&self.new_row);
        }
        self.p.iter_mut().for_each(|z| *z = ZERO);
        self.gram.iter_mut().for_each(|z| *z = ZERO);
        for m in 0..self.n {
            let row = &self.rows[m * k..(m + 1) * k];
            for i in 0..self.r {
                let t = self.targets[(i, m)];
                for c in 0..k {
                    self.p[i * k + c] += t * row[c];
                }
            }
            for a in 0..k {
                let ca = row[a].conj();
                for b in 0..k {
                    self.gram[a * k + b] += ca * row[b];
                }
            }
        }
    }

    fn cost(solver: &mut SmallSolver, goal: Goal, p: &[Complex64], gram: &[Complex64]) -> f64 {
        match goal {
            Goal::ZeroForcing => solver.trace_form(p, gram),
            Goal::Capture => -solver.inverse_quadratic(gram, p),
        }
    }

    fn current_cost(&mut self) -> f64 {
        Self::cost(&mut self.solver, self.goal, &self.p, &self.gram)
    }

    /// Cost after setting `phases[coord] = value`, without committing.
    fn try_move(&mut self, phases: &mut [usize], coord: usize, value: usize) -> f64 {
        self.try_assign(phases, &[(coord, value)])
    }

    /// Cost after a joint assignment of coordinates that share one row of
    /// `A`, without committing.
    fn try_assign(&mut self, phases: &mut [usize], moves: &[(usize, usize)]) -> f64 {
        let k = self.k;
        let m = self.model.row_of(moves[0].0);
        let mut old = [0usize; 2];
        for (slot, &(coord, value)) in moves.iter().enumerate() {
            old[slot] = phases[coord];
            phases[coord] = value;
        }
        self.model.fill_row(m, phases, &self.alphabet, &mut self.new_row);
        for (slot, &(coord, _)) in moves.iter().enumerate() {
            phases[coord] = old[slot];
        }
        let old_row = &self.rows[m * k..(m + 1) * k];
        self.p_try.copy_from_slice(&self.p);
        for i in 0..self.r {
            let t = self.targets[(i, m)];
            for c in 0..k {
                let d = self.new_row[c] - old_row[c];
                if d != ZERO {
                    self.p_try[i * k + c] += t * d;
                }
            }
        }
        self.gram_try.copy_from_slice(&self.gram);
        for a in 0..k {
            for b in 0..k {
                self.gram_try[a * k + b] += self.new_row[a].conj() * self.new_row[b] - old_row[a].conj() * old_row[b];
            }
        }
        Self::cost(&mut self.solver, self.goal, &self.p_try, &self.gram_try)
    }

    /// Applies the assignment whose trial is in the scratch buffers.
    fn commit(&mut self, phases: &mut [usize], moves: &[(usize, usize)]) {
        let k = self.k;
        let m = self.model.row_of(moves[0].0);
        for &(coord, value) in moves {
            phases[coord] = value;
        }
        self.accept_trial();
        self.model.fill_row(m, phases, &self.alphabet, &mut self.new_row);
        self.rows[m * k..(m + 1) * k].copy_from_slice(&self.new_row);
    }

    /// One pass of joint moves on every pair of phases feeding the same
    /// antenna (fully connected network only). Returns the new cost.
    fn pair_pass(&mut self, phases: &mut [usize], mut cost: f64) -> (f64, bool) {
        let RowModel::Full { k, .. } = self.model else {
            return (cost, false);
        };
        let levels = self.alphabet.len();
        let mut changed = false;
        for m in 0..self.n {
            for c1 in 0..k {
                for c2 in c1 + 1..k {
                    let (i1, i2) = (m * k + c1, m * k + c2);
                    let current = (phases[i1], phases[i2]);
                    let mut best = (cost, current);
                    for v1 in 0..levels {
                        for v2 in 0..levels {
                            if v1 == current.0 || v2 == current.1 {
                                continue;
                            }
                            let c = self.try_assign(phases, &[(i1, v1), (i2, v2)]);
                            if improves(c, best.0) {
                                best = (c, (v1, v2));
                            }
                        }
                    }
                    if best.1 != current {
                        let moves = [(i1, best.1 .0), (i2, best.1 .1)];
                        self.try_assign(phases, &moves);
                        self.commit(phases, &moves);
                        cost = best.0;
                        changed = true;
                    }
                }
            }
        }
        (cost, changed)
    }

    fn accept_trial(&mut self) {
        std::mem::swap(&mut self.p, &mut self.p_try);
        std::mem::swap(&mut self.gram, &mut self.gram_try);
    }

    /// Cyclic descent from `phases`; returns the final cost and the
    /// per-sweep history.
    fn descend(&mut self, phases: &mut [usize], cfg: &SolverConfig) -> (f64, Vec<f64>) {
        let levels = self.alphabet.len();
        self.rebuild(phases);
        let mut cost = self.current_cost();
        let mut history = vec![cost];
        for _ in 0..cfg.max_iters {
            let start = cost;
            let mut changed = false;
            for coord in 0..phases.len() {
                let current = phases[coord];
                let mut best = (cost, current);
                for v in 0..levels {
                    if v == current {
                        continue;
                    }
                    let c = self.try_move(phases, coord, v);
                    if improves(c, best.0) {
                        best = (c, v);
                    }
                }
                if best.1 != current {
                    // re-run the winning move so the scratch buffers hold it
                    self.try_move(phases, coord, best.1);
                    self.commit(phases, &[(coord, best.1)]);
                    cost = best.0;
                    changed = true;
                }
            }
            if !changed {
                // single moves are stuck; try coupled ones before giving up
                let (_, moved) = self.pair_pass(phases, cost);
                changed = moved;
            }
            // resynchronize to shed accumulated rounding
            self.rebuild(phases);
            cost = self.current_cost();
            history.push(cost);
            if !changed {
                break;
            }
            if start.is_finite() && (start - cost).abs() <= cfg.tol * start.abs() {
                break;
            }
        }
        (cost, history)
    }
}

/// Redraws a random share of the coordinates. The share grows with the
/// restart index so later starts land farther away.
fn perturbed(init: &[usize], levels: usize, cfg: &SolverConfig, restart: u64) -> Vec<usize> {
    let fraction = (cfg.perturb_fraction * restart as f64).min(1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(restart);
    init.iter()
        .map(|&p| if rng.random::<f64>() < fraction { rng.random_range(0..levels) } else { p })
        .collect()
}

/// Deterministic first guess for the phase-tuned variants.
fn initial_phases(spec: &ArchitectureSpec, h: &CMatrix) -> Vec<usize> {
    let bits = spec.phase_bits();
    let k = spec.n_rf;
    let q = |phi: f64| quantize_phase(phi, bits).index;
    match spec.variant {
        Variant::HadbFc | Variant::HadbPc => match zf_weights(h) {
            Ok(w) => {
                if spec.variant == Variant::HadbFc {
                    (0..spec.n_t * k).map(|i| q(w[(i / k, i % k)].arg())).collect()
                } else {
                    let map = spec.chain_of_element.as_ref().expect("PC spec carries its partition");
                    (0..spec.n_t).map(|m| q(w[(m, map[m])].arg())).collect()
                }
            }
            Err(_) => vec![0; spec.phase_count()],
        },
        Variant::TaraFi | Variant::TaraSi => {
            // co-phase the illumination with the strongest user's conjugate channel
            let g = &spec.illumination().expect("TARA spec carries its illumination").g;
            let dominant = (0..h.nrows())
                .max_by(|&a, &b| h.row(a).norm_squared().total_cmp(&h.row(b).norm_squared()))
                .unwrap_or(0);
            (0..spec.n_t)
                .map(|m| {
                    let field: Complex64 = g.row(m).iter().sum();
                    q(-h[(dominant, m)].arg() - field.arg())
                })
                .collect()
        }
        Variant::Fd | Variant::Rl => Vec::new(),
    }
}

fn check_dims(spec: &ArchitectureSpec, h: &CMatrix) -> Result<()> {
    if h.ncols() != spec.n_t {
        return Err(Error::InvalidArgument(format!(
            "channel has {} columns, {} has {} antennas",
            h.ncols(),
            spec.variant,
            spec.n_t
        )));
    }
    let users_ok = match spec.variant {
        Variant::Fd => h.nrows() >= 1 && h.nrows() <= spec.n_t,
        _ => h.nrows() == spec.n_rf,
    };
    if !users_ok {
        return Err(Error::InvalidArgument(format!(
            "{} with {} chains cannot zero-force {} users",
            spec.variant,
            spec.n_rf,
            h.nrows()
        )));
    }
    Ok(())
}

/// Analog state minimizing the zero-forcing power `J` for channel `h`.
pub fn optimize_analog(spec: &ArchitectureSpec, h: &CMatrix, cfg: &SolverConfig) -> Result<AnalogState> {
    Ok(search_trace(spec, h, cfg)?.state)
}

/// [`optimize_analog`] with the objective history of the winning start.
pub fn search_trace(spec: &ArchitectureSpec, h: &CMatrix, cfg: &SolverConfig) -> Result<SearchTrace> {
    check_dims(spec, h)?;
    match spec.variant {
        Variant::Fd => {
            let j = super::zf::objective_j(h, &CMatrix::identity(spec.n_t, spec.n_t));
            Ok(SearchTrace { state: AnalogState::default(), objective: j, history: vec![j] })
        }
        Variant::Rl => subset_search(spec, h, cfg),
        _ => {
            let model = RowModel::for_spec(spec).expect("phase-tuned variant");
            let mut search = PhaseSearch::new(model, h, Goal::ZeroForcing, spec.n_rf, spec.phase_bits());
            let init = initial_phases(spec, h);
            let mut best: Option<(f64, Vec<usize>, Vec<f64>)> = None;
            for restart in 0..=cfg.restarts {
                // later starts kick the best state found so far
                let mut phases = match &best {
                    None => init.clone(),
                    Some((_, incumbent, _)) => perturbed(incumbent, spec.phase_levels(), cfg, restart as u64),
                };
                let (cost, history) = search.descend(&mut phases, cfg);
                let better = match &best {
                    None => true,
                    Some((b, _, _)) => improves(cost, *b),
                };
                if better {
                    best = Some((cost, phases, history));
                }
            }
            let (objective, phases, history) = best.expect("at least one start");
            Ok(SearchTrace { state: AnalogState { phases, beam_selection: Vec::new() }, objective, history })
        }
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

struct SubsetCost<'a> {
    hl: CMatrix,
    lgram: CMatrix,
    k: usize,
    p: Vec<Complex64>,
    gram: Vec<Complex64>,
    solver: SmallSolver,
    _spec: &'a ArchitectureSpec,
}

impl<'a> SubsetCost<'a> {
    fn new(spec: &'a ArchitectureSpec, h: &CMatrix) -> Self {
        let lens = spec.lens().expect("RL spec carries its beam matrix") * Complex64::new(spec.rf.switch_amplitude(), 0.0);
        let k = spec.n_rf;
        Self {
            hl: h * &lens,
            lgram: lens.adjoint() * &lens,
            k,
            p: vec![ZERO; k * k],
            gram: vec![ZERO; k * k],
            solver: SmallSolver::new(k),
            _spec: spec,
        }
    }

    fn eval(&mut self, sel: &[usize]) -> f64 {
        let k = self.k;
        for i in 0..k {
            for (c, &b) in sel.iter().enumerate() {
                self.p[i * k + c] = self.hl[(i, b)];
            }
        }
        for (a, &ba) in sel.iter().enumerate() {
            for (c, &bc) in sel.iter().enumerate() {
                self.gram[a * k + c] = self.lgram[(ba, bc)];
            }
        }
        self.solver.trace_form(&self.p, &self.gram)
    }
}

fn subset_search(spec: &ArchitectureSpec, h: &CMatrix, cfg: &SolverConfig) -> Result<SearchTrace> {
    let nb = spec.n_beams();
    let k = spec.n_rf;
    let mut cost = SubsetCost::new(spec, h);
    let exhaustive = match cfg.subset_search {
        SubsetSearch::Exhaustive => true,
        SubsetSearch::GreedySwap => false,
        SubsetSearch::Auto => binomial(nb, k) <= cfg.exhaustive_limit as u128,
    };
    if exhaustive {
        let mut sel: Vec<usize> = (0..k).collect();
        let mut best = (cost.eval(&sel), sel.clone());
        let mut history = vec![best.0];
        loop {
            // next combination in lexicographic order
            let mut i = k;
            while i > 0 && sel[i - 1] == nb - k + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            sel[i - 1] += 1;
            for j in i..k {
                sel[j] = sel[j - 1] + 1;
            }
            let c = cost.eval(&sel);
            if c < best.0 {
                best = (c, sel.clone());
                history.push(c);
            }
        }
        return Ok(SearchTrace {
            state: AnalogState { phases: Vec::new(), beam_selection: best.1 },
            objective: best.0,
            history,
        });
    }

    // greedy: strongest users first, each takes its best-matched free beam
    let mut users: Vec<usize> = (0..k).collect();
    users.sort_by(|&a, &b| h.row(b).norm_squared().total_cmp(&h.row(a).norm_squared()));
    let mut sel = vec![usize::MAX; k];
    for (slot, &u) in users.iter().enumerate() {
        let pick = (0..nb)
            .filter(|b| !sel.contains(b))
            .max_by(|&a, &b| {
                let ga = cost.hl[(u, a)].norm_sqr() / cost.lgram[(a, a)].re;
                let gb = cost.hl[(u, b)].norm_sqr() / cost.lgram[(b, b)].re;
                ga.total_cmp(&gb)
            })
            .expect("enough beams");
        sel[slot] = pick;
    }
    let (mut best_cost, mut history) = swap_descent(&mut cost, &mut sel, nb, cfg);
    let mut best_sel = sel.clone();
    for restart in 1..=cfg.restarts {
        // kick the incumbent: swap a growing number of slots for free beams
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(restart as u64);
        let mut trial = best_sel.clone();
        let kicks = ((k as f64 * cfg.perturb_fraction * restart as f64).ceil() as usize).clamp(1, k);
        for _ in 0..kicks {
            let slot = rng.random_range(0..k);
            let free: Vec<usize> = (0..nb).filter(|b| !trial.contains(b)).collect();
            if let Some(&b) = free.get(rng.random_range(0..free.len().max(1))) {
                trial[slot] = b;
            }
        }
        let (c, h) = swap_descent(&mut cost, &mut trial, nb, cfg);
        if improves(c, best_cost) {
            best_cost = c;
            best_sel = trial;
            history = h;
        }
    }
    Ok(SearchTrace {
        state: AnalogState { phases: Vec::new(), beam_selection: best_sel },
        objective: best_cost,
        history,
    })
}

/// Replaces one selected beam at a time by the best free one until no
/// replacement helps.
fn swap_descent(cost: &mut SubsetCost<'_>, sel: &mut [usize], nb: usize, cfg: &SolverConfig) -> (f64, Vec<f64>) {
    let mut current = cost.eval(sel);
    let mut history = vec![current];
    for _ in 0..cfg.max_iters {
        let mut changed = false;
        for slot in 0..sel.len() {
            let incumbent = sel[slot];
            let mut best = (current, incumbent);
            for b in 0..nb {
                if sel.contains(&b) {
                    continue;
                }
                sel[slot] = b;
                let c = cost.eval(sel);
                if improves(c, best.0) {
                    best = (c, b);
                }
            }
            sel[slot] = best.1;
            if best.1 != incumbent {
                current = best.0;
                changed = true;
            }
        }
        history.push(current);
        if !changed {
            break;
        }
    }
    (current, history)
}

/// Single-user beam steering: the analog state and digital weights that put
/// the largest share of the target response `t` into the network's span.
///
/// `t` is the maximum-ratio excitation toward the user (the steering
/// vector). Returns the state and the chain weights `b`, so that `A·b` is the
/// antenna excitation. The lens network uses its single best beamport.
pub fn optimize_steering(spec: &ArchitectureSpec, t: &CVector, cfg: &SolverConfig) -> Result<(AnalogState, CVector)> {
    if t.len() != spec.n_t {
        return Err(Error::InvalidArgument("target length differs from antenna count".into()));
    }
    match spec.variant {
        Variant::Fd => Ok((AnalogState::default(), t.clone())),
        Variant::Rl => {
            let lens = spec.lens().expect("RL spec carries its beam matrix");
            let best = (0..lens.ncols())
                .max_by(|&a, &b| {
                    let score = |c: usize| {
                        let col = lens.column(c);
                        col.dotc(t).norm_sqr() / col.norm_squared()
                    };
                    score(a).total_cmp(&score(b))
                })
                .expect("lens has beams");
            let mut sel = vec![best];
            sel.extend((0..lens.ncols()).filter(|&b| b != best).take(spec.n_rf - 1));
            let mut b = CVector::zeros(spec.n_rf);
            b[0] = Complex64::new(1.0, 0.0);
            Ok((AnalogState { phases: Vec::new(), beam_selection: sel }, b))
        }
        _ => {
            let bits = spec.phase_bits();
            let levels = spec.phase_levels();
            let k = spec.n_rf;
            let q = |phi: f64| quantize_phase(phi, bits).index;
            let step = 2.0 * std::f64::consts::PI / levels as f64;
            let init: Vec<usize> = match spec.variant {
                // stagger the chains by fractions of a step so their sum
                // resolves phases finer than one shifter can
                Variant::HadbFc => {
                    (0..spec.n_t * k).map(|i| q(t[i / k].arg() + step * (i % k) as f64 / k as f64)).collect()
                }
                Variant::HadbPc => (0..spec.n_t).map(|m| q(t[m].arg())).collect(),
                _ => {
                    let g = &spec.illumination().expect("TARA spec carries its illumination").g;
                    (0..spec.n_t).map(|m| q(t[m].arg() - g.row(m).iter().sum::<Complex64>().arg())).collect()
                }
            };
            // the capture objective works on the row tᴴ
            let target = CMatrix::from_fn(1, spec.n_t, |_, m| t[m].conj());
            let model = RowModel::for_spec(spec).expect("phase-tuned variant");
            let mut search = PhaseSearch::new(model, &target, Goal::Capture, k, bits);
            let mut best: Option<(f64, Vec<usize>)> = None;
            for restart in 0..=cfg.restarts {
                let mut phases = if restart == 0 { init.clone() } else { perturbed(&init, levels, cfg, restart as u64) };
                let (c, _) = search.descend(&mut phases, cfg);
                if best.as_ref().is_none_or(|(b, _)| improves(c, *b)) {
                    best = Some((c, phases));
                }
            }
            let (_, phases) = best.expect("at least one start");
            let state = AnalogState { phases, beam_selection: Vec::new() };
            let a = crate::frontend::analog_transfer(spec, &state)?;
            let b = capture_weights(&a, t);
            Ok((state, b))
        }
    }
}

/// `b = (AᴴA)⁻¹Aᴴt`, regularized for rank-deficient networks.
fn capture_weights(a: &CMatrix, t: &CVector) -> CVector {
    let mut gram = a.adjoint() * a;
    let k = gram.nrows();
    let ridge = 1e-12 * (0..k).map(|i| gram[(i, i)].re).sum::<f64>() / k as f64;
    for i in 0..k {
        gram[(i, i)] += Complex64::new(ridge, 0.0);
    }
    let rhs = a.adjoint() * t;
    gram.lu().solve(&rhs).unwrap_or(rhs)
}
