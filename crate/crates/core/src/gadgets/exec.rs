use std::collections::BTreeMap;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    AncillaTarget, CorrectionEntry, CorrectionTarget, Gadget, GadgetError, LogicalOp, Readout, RegisterKind,
    Step, Vocabulary,
};
use crate::css::CssCode;
use crate::gf2::BinaryVector;
use crate::sim::{
    apply_in_place, derive_logical_action, encode, encode_basis, logical_amplitudes, logical_index,
    BitwiseGate, BlockDecoder, CMatrix, LogicalActionReport, LogicalState, MeasureBasis, TOLERANCE,
};

/// Looser tolerance used while searching for corrections; the final check
/// uses [`TOLERANCE`].
const SEARCH_TOLERANCE: f64 = 1e-7;
const MAX_INPUT_QUBITS: usize = 6;

type Outcome = BTreeMap<String, u64>;

fn outcome_string(o: &Outcome) -> String {
    o.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(",")
}

#[derive(Clone)]
struct Factor {
    regs: Vec<usize>,
    state: LogicalState,
}

/// One branch of the execution for a fixed input, unnormalised so that its
/// squared norm is the branch probability.
#[derive(Clone)]
struct Path {
    outcome: Outcome,
    factors: Vec<Factor>,
    scalar: Complex64,
    /// Per measurement: every outcome word of the class with its phase
    /// relative to the class representative.
    phases: BTreeMap<String, Vec<(BinaryVector, Complex64)>>,
}

impl Path {
    fn locate(&self, reg: usize) -> Option<(usize, usize)> {
        self.factors
            .iter()
            .enumerate()
            .find_map(|(fi, f)| f.regs.iter().position(|&r| r == reg).map(|p| (fi, p)))
    }

    fn live(&self) -> Vec<usize> {
        let mut regs: Vec<usize> = self.factors.iter().flat_map(|f| f.regs.iter().copied()).collect();
        regs.sort_unstable();
        regs
    }

    /// Merges the factors holding `regs` into one and returns its index.
    fn merge(&mut self, regs: &[usize], step: usize) -> Result<usize, GadgetError> {
        let mut idx = Vec::new();
        for &r in regs {
            let (fi, _) = self.locate(r).ok_or_else(|| GadgetError::Malformed {
                step,
                detail: format!("register {r} is not live"),
            })?;
            if !idx.contains(&fi) {
                idx.push(fi);
            }
        }
        idx.sort_unstable();
        let mut parts: Vec<Factor> = idx.iter().rev().map(|&i| self.factors.remove(i)).collect();
        parts.reverse();
        let mut merged = parts.remove(0);
        for p in parts {
            merged.state = merged.state.tensor(&p.state);
            merged.regs.extend(p.regs);
        }
        self.factors.push(merged);
        Ok(self.factors.len() - 1)
    }

    fn apply(&mut self, gate: &BitwiseGate, step: usize) -> Result<(), GadgetError> {
        let fi = self.merge(&gate.registers(), step)?;
        let f = &mut self.factors[fi];
        let local = gate.remap(|r| f.regs.iter().position(|&x| x == r).expect("merged"));
        apply_in_place(&local, &mut f.state)?;
        Ok(())
    }

    /// Logical amplitudes with registers in `order`, and the norm outside
    /// the code space. Factors are decoded separately and then combined.
    fn snapshot(&self, order: &[usize], code: &CssCode) -> (Vec<Complex64>, f64) {
        let k = code.k;
        let parts: Vec<(Vec<Complex64>, f64, f64)> = self
            .factors
            .iter()
            .map(|f| {
                let codes = vec![code; f.regs.len()];
                let (amps, leak) = logical_amplitudes(&f.state, &codes);
                (amps, leak, f.state.norm_sqr())
            })
            .collect();
        // Position of each output register inside its factor's index.
        let place: Vec<(usize, usize)> = order
            .iter()
            .map(|r| {
                let (fi, p) = self.locate(*r).expect("order names live registers");
                (fi, (self.factors[fi].regs.len() - 1 - p) * k)
            })
            .collect();
        let total = k * order.len();
        let mask = (1usize << k) - 1;
        let amps: Vec<Complex64> = (0..1usize << total)
            .map(|g| {
                let mut sub = vec![0usize; parts.len()];
                for (i, &(fi, shift)) in place.iter().enumerate() {
                    let bits = (g >> (total - (i + 1) * k)) & mask;
                    sub[fi] |= bits << shift;
                }
                parts
                    .iter()
                    .zip(&sub)
                    .fold(self.scalar, |acc, ((a, _, _), &j)| acc * a[j])
            })
            .collect();
        let norm: f64 = parts.iter().map(|p| p.2).product::<f64>() * self.scalar.norm_sqr();
        let captured: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        (amps, (norm - captured).max(0.0))
    }
}

fn prepared_state(code: &CssCode, target: &AncillaTarget) -> Result<LogicalState, GadgetError> {
    let dim = 1usize << code.k;
    let zero = Complex64::default();
    let s = match target {
        AncillaTarget::ZeroL => encode_basis(code, &BinaryVector::zeros(code.k))?,
        AncillaTarget::PlusL => encode(code, &vec![Complex64::new(1.0 / (dim as f64).sqrt(), 0.0); dim])?,
        AncillaTarget::ZeroPlusU { u } => {
            let mut amps = vec![zero; dim];
            let i = logical_index(u);
            if i == 0 {
                amps[0] = Complex64::new(1.0, 0.0);
            } else {
                amps[0] = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
                amps[i] = amps[0];
            }
            encode(code, &amps)?
        }
        AncillaTarget::Cat { n } => LogicalState::cat(*n, false),
    };
    Ok(s)
}

struct Context<'a> {
    g: &'a Gadget,
    code: &'a CssCode,
    decoder: BlockDecoder,
    prepared: Vec<Option<LogicalState>>,
}

impl<'a> Context<'a> {
    fn new(g: &'a Gadget, code: &'a CssCode) -> Result<Self, GadgetError> {
        let prepared = g
            .steps
            .iter()
            .map(|s| match s {
                Step::Prepare { ancilla, .. } => prepared_state(code, &ancilla.target_state).map(Some),
                _ => Ok(None),
            })
            .collect::<Result<_, _>>()?;
        Ok(Self {
            g,
            code,
            decoder: BlockDecoder::new(code),
            prepared,
        })
    }

    fn classify(
        &self,
        reg: usize,
        basis: MeasureBasis,
        readout: &Readout,
        label: &str,
        word: &BinaryVector,
    ) -> Result<u64, GadgetError> {
        if let Readout::Parity = readout {
            return Ok((word.weight() % 2) as u64);
        }
        if self.g.registers[reg].kind == RegisterKind::Cat {
            return Err(GadgetError::BranchMismatch {
                label: label.into(),
                detail: "a cat register has only a parity readout".into(),
            });
        }
        let c = match basis {
            MeasureBasis::Z => self.decoder.decode(word).ok_or_else(|| GadgetError::BranchMismatch {
                label: label.into(),
                detail: format!("outcome {word} is not a codeword"),
            })?,
            MeasureBasis::X => BinaryVector::from_bits(self.code.coset_leaders.rows().iter().map(|d| word.dot(d))),
        };
        Ok(match readout {
            Readout::Eigen { u } => u64::from(c.dot(u)),
            _ => logical_index(&c) as u64,
        })
    }

    fn initial(&self, words: &[BinaryVector]) -> Result<Path, GadgetError> {
        let factors = self
            .g
            .inputs
            .iter()
            .zip(words)
            .map(|(&r, u)| {
                Ok(Factor {
                    regs: vec![r],
                    state: encode_basis(self.code, u)?,
                })
            })
            .collect::<Result<_, GadgetError>>()?;
        Ok(Path {
            outcome: Outcome::new(),
            factors,
            scalar: Complex64::new(1.0, 0.0),
            phases: BTreeMap::new(),
        })
    }

    /// Executes steps `0..upto` from `start`, returning every branch.
    fn run(&self, start: Path, upto: usize) -> Result<Vec<Path>, GadgetError> {
        let mut paths = vec![start];
        for (i, step) in self.g.steps[..upto].iter().enumerate() {
            let mut next = Vec::with_capacity(paths.len());
            for mut p in paths {
                match step {
                    Step::Prepare { reg, .. } => {
                        if p.locate(*reg).is_some() {
                            return Err(GadgetError::Malformed {
                                step: i,
                                detail: format!("register {reg} prepared while live"),
                            });
                        }
                        p.factors.push(Factor {
                            regs: vec![*reg],
                            state: self.prepared[i].clone().expect("prepared"),
                        });
                        next.push(p);
                    }
                    Step::Gate { gate } => {
                        p.apply(gate, i)?;
                        next.push(p);
                    }
                    Step::Measure {
                        reg,
                        basis,
                        label,
                        readout,
                    } => next.extend(self.measure(p, i, *reg, *basis, label, readout)?),
                    Step::Correct { label, keys, table, .. } => {
                        let table = table.as_ref().ok_or_else(|| GadgetError::MissingTable { label: label.clone() })?;
                        let key: Outcome = keys.iter().map(|k| (k.clone(), p.outcome[k])).collect();
                        let entry = table.iter().find(|e| e.outcome == key).ok_or_else(|| {
                            GadgetError::NoCorrection {
                                label: label.clone(),
                                outcome: outcome_string(&key),
                            }
                        })?;
                        for op in &entry.ops {
                            p.apply(&op.to_gate(self.code), i)?;
                        }
                        next.push(p);
                    }
                }
            }
            paths = next;
        }
        Ok(paths)
    }

    fn measure(
        &self,
        mut p: Path,
        step: usize,
        reg: usize,
        basis: MeasureBasis,
        label: &str,
        readout: &Readout,
    ) -> Result<Vec<Path>, GadgetError> {
        let (fi, pos) = p.locate(reg).ok_or_else(|| GadgetError::Malformed {
            step,
            detail: format!("register {reg} is not live"),
        })?;
        let mut factor = p.factors.remove(fi);
        if basis == MeasureBasis::X {
            apply_in_place(&BitwiseGate::H { reg: pos }, &mut factor.state)?;
        }
        let mut widths = factor.state.widths().to_vec();
        widths.remove(pos);
        let (off, w) = (factor.state.offset(pos), factor.state.width(pos));
        let mut split: BTreeMap<BinaryVector, Vec<(BinaryVector, Complex64)>> = BTreeMap::new();
        for (word, a) in factor.state.terms() {
            let rest = word.slice(0, off).concat(&word.slice(off + w, word.len() - off - w));
            split.entry(word.slice(off, w)).or_default().push((rest, *a));
        }
        let mut classes: BTreeMap<u64, Vec<(BinaryVector, LogicalState)>> = BTreeMap::new();
        for (word, terms) in split {
            let class = self.classify(reg, basis, readout, label, &word)?;
            classes
                .entry(class)
                .or_default()
                .push((word, LogicalState::from_terms(widths.clone(), terms)));
        }
        let mut regs = factor.regs.clone();
        regs.remove(pos);
        let mut out = Vec::with_capacity(classes.len());
        for (class, members) in classes {
            let rep = &members[0].1;
            let mut phases = Vec::with_capacity(members.len());
            for (word, s) in &members {
                let c = s.phase_relative_to(rep, TOLERANCE).ok_or_else(|| GadgetError::BranchMismatch {
                    label: label.into(),
                    detail: format!("outcome {word} leaves a different state than {} in its class", members[0].0),
                })?;
                phases.push((word.clone(), c));
            }
            let mut q = p.clone();
            let mut state = rep.clone();
            state.scale(Complex64::new((members.len() as f64).sqrt(), 0.0));
            if regs.is_empty() {
                q.scalar *= state.terms().iter().map(|(_, a)| *a).sum::<Complex64>();
            } else {
                q.factors.push(Factor {
                    regs: regs.clone(),
                    state,
                });
            }
            q.outcome.insert(label.to_string(), class);
            q.phases.insert(label.to_string(), phases);
            out.push(q);
        }
        Ok(out)
    }
}

/// Kraus matrices of every branch, columns indexed by logical input.
struct Collected {
    order: Vec<usize>,
    branches: BTreeMap<Outcome, CMatrix>,
    phase_consistent: bool,
    leakage: f64,
    /// Per input, the total probability over branches.
    input_totals: Vec<f64>,
}

fn collect(ctx: &Context, upto: usize, order: Option<&[usize]>) -> Result<Collected, GadgetError> {
    let k = ctx.code.k;
    let kin = ctx.g.input_qubits(k);
    if kin > MAX_INPUT_QUBITS {
        return Err(GadgetError::TooManyInputs(kin));
    }
    let runs: Vec<Vec<Path>> = (0..1usize << kin)
        .into_par_iter()
        .map(|j| ctx.run(ctx.initial(&ctx.g.input_words(k, j))?, upto))
        .collect::<Result<_, _>>()?;
    let order: Vec<usize> = match order {
        Some(o) => o.to_vec(),
        None => runs[0][0].live(),
    };
    let kout = k * order.len();
    let mut branches: BTreeMap<Outcome, CMatrix> = BTreeMap::new();
    let mut reference_phases: BTreeMap<Outcome, BTreeMap<String, Vec<(BinaryVector, Complex64)>>> = BTreeMap::new();
    let mut phase_consistent = true;
    let mut leakage: f64 = 0.0;
    let mut input_totals = vec![0.0; 1 << kin];
    for (j, paths) in runs.iter().enumerate() {
        for p in paths {
            if p.live() != {
                let mut o = order.clone();
                o.sort_unstable();
                o
            } {
                return Err(GadgetError::Malformed {
                    step: upto,
                    detail: "live registers differ from the expected output".into(),
                });
            }
            let (col, leak) = p.snapshot(&order, ctx.code);
            leakage = leakage.max(leak);
            let m = branches
                .entry(p.outcome.clone())
                .or_insert_with(|| CMatrix::zeros(1 << kout, 1 << kin));
            for (i, a) in col.into_iter().enumerate() {
                input_totals[j] += a.norm_sqr();
                m[(i, j)] = a;
            }
            input_totals[j] += leak;
            match reference_phases.get(&p.outcome) {
                None => {
                    reference_phases.insert(p.outcome.clone(), p.phases.clone());
                }
                Some(r) => phase_consistent &= same_phases(r, &p.phases),
            }
        }
    }
    Ok(Collected {
        order,
        branches,
        phase_consistent,
        leakage,
        input_totals,
    })
}

fn same_phases(
    a: &BTreeMap<String, Vec<(BinaryVector, Complex64)>>,
    b: &BTreeMap<String, Vec<(BinaryVector, Complex64)>>,
) -> bool {
    a.len() == b.len()
        && a.iter().zip(b).all(|((la, va), (lb, vb))| {
            la == lb
                && va.len() == vb.len()
                && va
                    .iter()
                    .zip(vb)
                    .all(|((wa, pa), (wb, pb))| wa == wb && (pa - pb).norm() < TOLERANCE)
        })
}

fn frobenius(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Deviation of `a` from `c·t` for the best unit `c` and the scale
/// `‖a‖/‖t‖`, measured after dividing out the scale.
fn phase_deviation(a: &CMatrix, t: &CMatrix) -> (f64, Complex64, f64) {
    let (nt, na) = (frobenius(t), frobenius(a));
    if nt == 0.0 || na == 0.0 {
        return (f64::INFINITY, Complex64::new(1.0, 0.0), 0.0);
    }
    let s = na / nt;
    let (idx, _) = t
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.norm().total_cmp(&y.1.norm()))
        .expect("nonempty");
    let ratio = a.as_slice()[idx] / (t.as_slice()[idx] * s);
    if ratio.norm() < 1e-6 {
        return (f64::INFINITY, Complex64::new(1.0, 0.0), s);
    }
    let c = ratio / ratio.norm();
    let dev = a
        .iter()
        .zip(t.iter())
        .map(|(x, y)| (x / s - c * y).norm())
        .fold(0.0, f64::max);
    (dev, c, s)
}

/// Applies a local operator on the registers at `positions` (in the
/// operator's register order) to every column of `m`.
fn apply_local(op: &CMatrix, positions: &[usize], k: usize, regs: usize, m: &CMatrix) -> CMatrix {
    let total = k * regs;
    let field = |g: usize, p: usize| (g >> (total - (p + 1) * k)) & ((1 << k) - 1);
    let mut out = CMatrix::zeros(m.nrows(), m.ncols());
    for g in 0..m.nrows() {
        let mut local = 0usize;
        let mut rest = g;
        for &p in positions {
            local = (local << k) | field(g, p);
            rest &= !(((1 << k) - 1) << (total - (p + 1) * k));
        }
        for l2 in 0..op.nrows() {
            let coeff = op[(l2, local)];
            if coeff.norm() == 0.0 {
                continue;
            }
            let mut target = rest;
            for (t, &p) in positions.iter().enumerate() {
                let bits = (l2 >> ((positions.len() - 1 - t) * k)) & ((1 << k) - 1);
                target |= bits << (total - (p + 1) * k);
            }
            for c in 0..m.ncols() {
                let v = m[(g, c)];
                if v.norm() != 0.0 {
                    out[(target, c)] += coeff * v;
                }
            }
        }
    }
    out
}

struct OpMatrix {
    op: LogicalOp,
    matrix: CMatrix,
    positions: Vec<usize>,
}

/// Logical matrices of the vocabulary, derived by simulating each gate.
fn vocabulary_ops(
    code: &CssCode,
    scope: &[usize],
    order: &[usize],
    vocab: Vocabulary,
) -> Result<(Vec<OpMatrix>, Vec<OpMatrix>), GadgetError> {
    let pos = |r: usize| order.iter().position(|&x| x == r).expect("scope register is live");
    let local = |op: &LogicalOp, regs: usize| -> Result<CMatrix, GadgetError> {
        let relabel = |r: usize| op.registers().iter().position(|&x| x == r).expect("own register");
        let gate = op.to_gate(code).remap(relabel);
        let codes = vec![code; regs];
        Ok(derive_logical_action(&codes, &[gate], None)?.derived())
    };
    let mut cliffords = Vec::new();
    if vocab.cx {
        for &c in scope {
            for &t in scope {
                if c != t {
                    let op = LogicalOp::Cx { control: c, target: t };
                    cliffords.push(OpMatrix {
                        matrix: local(&op, 2)?,
                        positions: vec![pos(c), pos(t)],
                        op,
                    });
                }
            }
        }
    }
    if vocab.cz {
        for (i, &a) in scope.iter().enumerate() {
            for &b in &scope[i + 1..] {
                let op = LogicalOp::Cz { a, b };
                cliffords.push(OpMatrix {
                    matrix: local(&op, 2)?,
                    positions: vec![pos(a), pos(b)],
                    op,
                });
            }
        }
    }
    let mut paulis = Vec::new();
    if vocab.paulis {
        for &r in scope {
            for qubit in 0..code.k {
                for op in [LogicalOp::X { reg: r, qubit }, LogicalOp::Z { reg: r, qubit }] {
                    paulis.push(OpMatrix {
                        matrix: local(&op, 1)?,
                        positions: vec![pos(r)],
                        op,
                    });
                }
            }
        }
    }
    Ok((cliffords, paulis))
}

/// Subsets of `0..n` ordered by size, then lexicographically.
fn subsets_by_size(n: usize) -> Vec<u64> {
    let mut all: Vec<u64> = (0..1u64 << n).collect();
    all.sort_by_key(|s| (s.count_ones(), *s));
    all
}

/// Full-space matrix of the product of the chosen ops, applied in order.
fn product(ops: &[&OpMatrix], k: usize, regs: usize) -> CMatrix {
    let dim = 1usize << (k * regs);
    ops.iter()
        .fold(CMatrix::identity(dim, dim), |m, o| apply_local(&o.matrix, &o.positions, k, regs, &m))
}

/// Finds the first vocabulary word `C` with `C·K ∝ T` for every pair.
fn search(
    pairs: &[(&CMatrix, CMatrix)],
    cliffords: &[OpMatrix],
    paulis: &[OpMatrix],
    k: usize,
    regs: usize,
) -> Option<Vec<LogicalOp>> {
    let pick = |ops: &'_ [OpMatrix], set: u64| -> Vec<usize> { (0..ops.len()).filter(|i| set >> i & 1 == 1).collect() };
    let pauli_words: Vec<(Vec<usize>, CMatrix)> = subsets_by_size(paulis.len())
        .into_iter()
        .map(|ps| {
            let idx = pick(paulis, ps);
            let chosen: Vec<&OpMatrix> = idx.iter().map(|&i| &paulis[i]).collect();
            (idx, product(&chosen, k, regs))
        })
        .collect();
    for cs in subsets_by_size(cliffords.len()) {
        let cidx = pick(cliffords, cs);
        let chosen: Vec<&OpMatrix> = cidx.iter().map(|&i| &cliffords[i]).collect();
        let c = product(&chosen, k, regs);
        let after: Vec<CMatrix> = pairs.iter().map(|(kraus, _)| &c * *kraus).collect();
        for (pidx, p) in &pauli_words {
            let ok = after
                .iter()
                .zip(pairs)
                .all(|(m, (_, t))| phase_deviation(&(p * m), t).0 < SEARCH_TOLERANCE);
            if ok {
                return Some(
                    cidx.iter()
                        .map(|&i| cliffords[i].op.clone())
                        .chain(pidx.iter().map(|&i| paulis[i].op.clone()))
                        .collect(),
                );
            }
        }
    }
    None
}

/// Fills every empty correction table by branch-complete simulation.
///
/// For each correction step, all branches up to that step are simulated on
/// every logical basis input; each branch's logical Kraus matrix `K` is
/// compared with the target (the ideal action, or the branch with all
/// conditioning outcomes zero), and the smallest vocabulary word `C` with
/// `C·K ∝ target` for every branch sharing the conditioning outcome is
/// stored.
pub fn derive_corrections(g: &Gadget, code: &CssCode) -> Result<Gadget, GadgetError> {
    let mut out = g.clone();
    for s in 0..out.steps.len() {
        let Step::Correct {
            label,
            keys,
            scope,
            vocabulary,
            target,
            table: None,
        } = &out.steps[s]
        else {
            continue;
        };
        let (label, keys, scope, vocabulary, target) =
            (label.clone(), keys.clone(), scope.clone(), *vocabulary, *target);
        let ctx = Context::new(&out, code)?;
        let order = match target {
            CorrectionTarget::Ideal => Some(out.outputs.as_slice()),
            CorrectionTarget::ReferenceBranch => None,
        };
        let coll = collect(&ctx, s, order)?;
        let (cliffords, paulis) = vocabulary_ops(code, &scope, &coll.order, vocabulary)?;
        let mut grouped: BTreeMap<Outcome, Vec<(&Outcome, &CMatrix)>> = BTreeMap::new();
        for (o, m) in &coll.branches {
            let key: Outcome = keys.iter().map(|k| (k.clone(), o[k])).collect();
            grouped.entry(key).or_default().push((o, m));
        }
        let mut table = Vec::new();
        for (key, members) in grouped {
            let pairs: Vec<(&CMatrix, CMatrix)> = members
                .iter()
                .map(|(o, m)| {
                    let t = match target {
                        CorrectionTarget::Ideal => Ok(out.ideal_matrix(code.k, o)),
                        CorrectionTarget::ReferenceBranch => {
                            let mut r = (*o).clone();
                            for k in &keys {
                                r.insert(k.clone(), 0);
                            }
                            coll.branches.get(&r).cloned().ok_or_else(|| GadgetError::NoCorrection {
                                label: label.clone(),
                                outcome: format!("{} (no reference branch)", outcome_string(o)),
                            })
                        }
                    }?;
                    Ok((*m, t))
                })
                .collect::<Result<_, GadgetError>>()?;
            let ops = search(&pairs, &cliffords, &paulis, code.k, coll.order.len()).ok_or_else(|| {
                GadgetError::NoCorrection {
                    label: label.clone(),
                    outcome: outcome_string(&key),
                }
            })?;
            table.push(CorrectionEntry { outcome: key, ops });
        }
        if let Step::Correct { table: slot, .. } = &mut out.steps[s] {
            *slot = Some(table);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BranchSummary {
    pub outcome: BTreeMap<String, u64>,
    /// Mean over logical basis inputs.
    pub probability: f64,
    /// Entry deviation from the ideal action after removing scale and phase.
    pub deviation: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GadgetReport {
    pub gadget: Gadget,
    pub branches: Vec<BranchSummary>,
    /// Largest `|Σ_b p_b − 1|` over logical basis inputs.
    pub probability_defect: f64,
    pub max_deviation: f64,
    pub leakage: f64,
    /// Every outcome word of a class leaves the same state with the same
    /// relative phase, for every input.
    pub phase_consistent: bool,
    /// Action of the all-zero branch, phase-aligned with the ideal.
    pub action: LogicalActionReport,
}

impl GadgetReport {
    pub fn passes(&self) -> bool {
        self.max_deviation < TOLERANCE
            && self.probability_defect < TOLERANCE
            && self.leakage < TOLERANCE
            && self.phase_consistent
    }
}

/// Simulates every branch of `g` on every logical basis input, deriving
/// correction tables first when they are missing, and compares each branch
/// with the ideal action.
pub fn simulate_gadget(g: &Gadget, code: &CssCode) -> Result<GadgetReport, GadgetError> {
    let g = derive_corrections(g, code)?;
    let ctx = Context::new(&g, code)?;
    let coll = collect(&ctx, g.steps.len(), Some(&g.outputs))?;
    let kin = g.input_qubits(code.k);
    let mut branches = Vec::new();
    let mut max_deviation: f64 = 0.0;
    let mut action = None;
    for (o, m) in &coll.branches {
        let ideal = g.ideal_matrix(code.k, o);
        let (dev, c, s) = phase_deviation(m, &ideal);
        max_deviation = max_deviation.max(dev);
        if action.is_none() {
            let aligned = m.map(|z| z / (c * s));
            action = Some(LogicalActionReport::from_matrix(&aligned, Some(&ideal), coll.leakage));
        }
        branches.push(BranchSummary {
            outcome: o.clone(),
            probability: frobenius(m).powi(2) / (1usize << kin) as f64,
            deviation: dev,
        });
    }
    let probability_defect = coll.input_totals.iter().map(|t| (t - 1.0).abs()).fold(0.0, f64::max);
    Ok(GadgetReport {
        action: action.expect("at least one branch"),
        gadget: g,
        branches,
        probability_defect,
        max_deviation,
        leakage: coll.leakage,
        phase_consistent: coll.phase_consistent,
    })
}

/// One outcome of running a gadget on a concrete encoded input.
#[derive(Clone, Debug)]
pub struct GadgetBranch {
    pub outcome: BTreeMap<String, u64>,
    pub probability: f64,
    /// Normalised output state, registers in the gadget's output order.
    pub state: LogicalState,
}

/// Runs `g` (with its correction tables) on `input`, whose registers are the
/// gadget's input registers in order.
pub fn run_gadget_on(g: &Gadget, code: &CssCode, input: &LogicalState) -> Result<Vec<GadgetBranch>, GadgetError> {
    if input.register_count() != g.inputs.len() {
        return Err(GadgetError::Malformed {
            step: 0,
            detail: format!("input has {} registers, gadget expects {}", input.register_count(), g.inputs.len()),
        });
    }
    let ctx = Context::new(g, code)?;
    let start = Path {
        outcome: Outcome::new(),
        factors: vec![Factor {
            regs: g.inputs.clone(),
            state: input.clone(),
        }],
        scalar: Complex64::new(1.0, 0.0),
        phases: BTreeMap::new(),
    };
    let total = input.norm_sqr();
    ctx.run(start, g.steps.len())?
        .into_iter()
        .map(|p| {
            let mut regs = Vec::new();
            let mut state: Option<LogicalState> = None;
            for f in &p.factors {
                regs.extend(f.regs.iter().copied());
                state = Some(match state {
                    None => f.state.clone(),
                    Some(s) => s.tensor(&f.state),
                });
            }
            let perm: Vec<usize> = g
                .outputs
                .iter()
                .map(|r| regs.iter().position(|x| x == r).expect("output is live"))
                .collect();
            let mut state = state.expect("outputs live").permute_registers(&perm);
            state.scale(p.scalar);
            let probability = state.norm_sqr() / total;
            state.normalize();
            Ok(GadgetBranch {
                outcome: p.outcome,
                probability,
                state,
            })
        })
        .collect()
}
