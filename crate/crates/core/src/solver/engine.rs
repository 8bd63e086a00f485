//! Compiled row form and the propagation/search engine.
//!
//! Every row is stored as `sum a_j x_j - s*K <= b` with integer data, where
//! the optional `K` term is a continuous variable bounded from below by the
//! row. Binaries carry a value in {free, 0, 1}; each row tracks its minimum
//! activity over the free binaries, updated on every fix and undone from a
//! trail.

use num_traits::{Signed, Zero};

use crate::ip::{evaluate, Assignment, IpModel, Relation, Sense, VarKind};
use crate::rational::{ceil, floor, int, lcm_of_denominators, Rational};
use crate::solver::SolveError;

pub(crate) const FREE: i8 = -1;
const INF: i64 = i64::MAX / 4;

#[derive(Debug, Clone)]
pub(crate) struct ContTerm {
    pub k: usize,
    pub s: i64,
    pub b: i64,
}

#[derive(Debug, Clone)]
pub(crate) struct Row {
    pub coefs: Vec<(usize, i64)>,
    pub max_abs: i64,
    pub base_rhs: i64,
    pub cont: Option<ContTerm>,
    pub source: usize,
}

#[derive(Debug, Clone)]
pub(crate) struct ContVar {
    pub var: usize,
    pub lb: Rational,
    pub ub: Option<Rational>,
    pub obj: Rational,
    pub rows: Vec<usize>,
}

#[derive(Debug, Clone)]
pub(crate) struct Compiled {
    pub var_of_bin: Vec<usize>,
    pub bin_of_var: Vec<Option<usize>>,
    pub prefer_one: Vec<bool>,
    pub obj_scale: i64,
    pub obj_row: Option<usize>,
    pub cont: Vec<ContVar>,
    pub rows: Vec<Row>,
    pub cols: Vec<Vec<(u32, i64)>>,
    pub groups: Vec<Vec<usize>>,
    pub group_of: Vec<Vec<u32>>,
    pub root_fix: Vec<(usize, bool)>,
    pub negate: bool,
    /// Lower bound of the binary objective part over all points.
    pub bin_floor: Rational,
}

fn checked(v: Option<i64>) -> Result<i64, SolveError> {
    v.ok_or(SolveError::Overflow)
}

fn to_i64(r: Rational) -> Result<i64, SolveError> {
    if r.is_integer() {
        Ok(r.to_integer())
    } else {
        Err(SolveError::Overflow)
    }
}

impl Compiled {
    pub fn new(model: &IpModel) -> Result<Compiled, SolveError> {
        let negate = model.objective().sense == Sense::Maximize;
        let mut var_of_bin = Vec::new();
        let mut bin_of_var = vec![None; model.vars().len()];
        let mut cont_of_var = vec![None; model.vars().len()];
        let mut cont = Vec::new();
        let mut root_fix = Vec::new();
        let mut prefer_one = Vec::new();
        for (i, v) in model.vars().iter().enumerate() {
            match v.kind {
                VarKind::Integer => return Err(SolveError::NonBinaryInteger(v.name.clone())),
                VarKind::Binary => {
                    let b = var_of_bin.len();
                    bin_of_var[i] = Some(b);
                    var_of_bin.push(i);
                    prefer_one.push(matches!(v.tag, crate::ip::VarTag::X { .. }));
                    if v.lower > int(1) || v.upper.is_some_and(|u| u < int(0)) || v.lower > v.upper.unwrap_or(v.lower) {
                        root_fix.push((b, false));
                        root_fix.push((b, true));
                    } else if v.lower > int(0) {
                        root_fix.push((b, true));
                    } else if v.upper.is_some_and(|u| u < int(1)) {
                        root_fix.push((b, false));
                    }
                }
                VarKind::Continuous => {
                    cont_of_var[i] = Some(cont.len());
                    let mut obj = model.objective().expr.coef(i);
                    if negate {
                        obj = -obj;
                    }
                    if obj.is_negative() {
                        return Err(if v.upper.is_none() {
                            SolveError::UnboundedObjective(v.name.clone())
                        } else {
                            SolveError::Unsupported(format!(
                                "continuous variable `{}` is rewarded by the objective",
                                v.name
                            ))
                        });
                    }
                    cont.push(ContVar { var: i, lb: v.lower, ub: v.upper, obj, rows: Vec::new() });
                }
            }
        }
        let nb = var_of_bin.len();
        let mut obj_rat = vec![Rational::zero(); nb];
        for (v, c) in model.objective().expr.terms() {
            if let Some(b) = bin_of_var[v] {
                obj_rat[b] = if negate { -c } else { c };
            }
        }
        let obj_scale = lcm_of_denominators(obj_rat.iter());
        let obj_int = obj_rat
            .iter()
            .map(|c| to_i64(*c * int(obj_scale)))
            .collect::<Result<Vec<_>, _>>()?;
        let bin_floor = obj_rat.iter().filter(|c| c.is_negative()).fold(Rational::zero(), |a, c| a + c);
        for (b, c) in obj_rat.iter().enumerate() {
            if c.is_negative() {
                prefer_one[b] = true;
            } else if c.is_positive() {
                prefer_one[b] = false;
            }
        }

        let mut rows = Vec::new();
        let mut groups = Vec::new();
        for (ci, c) in model.constraints().iter().enumerate() {
            let all_unit = c.rel == Relation::Eq
                && c.rhs == int(1)
                && !c.expr.is_empty()
                && c.expr.terms().all(|(v, a)| bin_of_var[v].is_some() && a == int(1));
            if all_unit {
                groups.push(c.expr.terms().map(|(v, _)| bin_of_var[v].unwrap()).collect::<Vec<_>>());
            }
            let orientations: &[i64] = match c.rel {
                Relation::Le => &[1],
                Relation::Ge => &[-1],
                Relation::Eq => &[1, -1],
            };
            for &sign in orientations {
                let sign = int(sign);
                let scale = lcm_of_denominators(c.expr.terms().map(|(_, a)| a).collect::<Vec<_>>().iter().chain([c.rhs].iter()));
                let scale = int(scale);
                let mut coefs = Vec::new();
                let mut cterm: Option<(usize, Rational)> = None;
                for (v, a) in c.expr.terms() {
                    let a = a * sign * scale;
                    if let Some(b) = bin_of_var[v] {
                        coefs.push((b, to_i64(a)?));
                    } else {
                        let k = cont_of_var[v].expect("declared variable");
                        if cterm.is_some() {
                            return Err(SolveError::Unsupported(format!(
                                "row `{}` holds more than one continuous variable",
                                c.name
                            )));
                        }
                        cterm = Some((k, a));
                    }
                }
                let b = to_i64(c.rhs * sign * scale)?;
                let (cont_term, base_rhs) = match cterm {
                    None => (None, b),
                    Some((k, a)) => {
                        if a.is_positive() {
                            return Err(SolveError::Unsupported(format!(
                                "row `{}` bounds continuous variable `{}` from above",
                                c.name,
                                model.variable(cont[k].var).name
                            )));
                        }
                        let s = to_i64(-a)?;
                        let base = match cont[k].ub {
                            Some(ub) => checked(b.checked_add(floor(&(int(s) * ub))))?,
                            None => INF,
                        };
                        cont[k].rows.push(rows.len());
                        (Some(ContTerm { k, s, b }), base)
                    }
                };
                let mut abs_sum: i64 = 0;
                for &(_, a) in &coefs {
                    abs_sum = checked(abs_sum.checked_add(a.abs()))?;
                }
                if abs_sum > INF / 4 {
                    return Err(SolveError::Overflow);
                }
                let max_abs = coefs.iter().map(|&(_, a)| a.abs()).max().unwrap_or(0);
                rows.push(Row { coefs, max_abs, base_rhs, cont: cont_term, source: ci });
            }
        }
        let obj_row = if obj_int.iter().any(|&c| c != 0) {
            let coefs: Vec<(usize, i64)> =
                obj_int.iter().enumerate().filter(|(_, &c)| c != 0).map(|(b, &c)| (b, c)).collect();
            let max_abs = coefs.iter().map(|&(_, a)| a.abs()).max().unwrap_or(0);
            rows.push(Row { coefs, max_abs, base_rhs: INF, cont: None, source: usize::MAX });
            Some(rows.len() - 1)
        } else {
            None
        };
        let mut cols = vec![Vec::new(); nb];
        for (r, row) in rows.iter().enumerate() {
            for &(b, a) in &row.coefs {
                cols[b].push((r as u32, a));
            }
        }
        let mut group_of = vec![Vec::new(); nb];
        for (g, members) in groups.iter().enumerate() {
            for &b in members {
                group_of[b].push(g as u32);
            }
        }
        Ok(Compiled {
            var_of_bin,
            bin_of_var,
            prefer_one,
            obj_scale,
            obj_row,
            cont,
            rows,
            cols,
            groups,
            group_of,
            root_fix,
            negate,
            bin_floor,
        })
    }

    pub fn nb(&self) -> usize {
        self.var_of_bin.len()
    }
}

/// Mutable search state for one worker.
#[derive(Clone)]
pub(crate) struct Engine<'a> {
    pub p: &'a Compiled,
    pub val: Vec<i8>,
    minact: Vec<i64>,
    rhs: Vec<i64>,
    trail: Vec<usize>,
    queue: Vec<u32>,
    in_queue: Vec<bool>,
    group_ones: Vec<u32>,
    group_free: Vec<u32>,
    free_count: usize,
    pub conflict_row: Option<usize>,
}

impl<'a> Engine<'a> {
    pub fn new(p: &'a Compiled) -> Engine<'a> {
        let nb = p.nb();
        let minact = p
            .rows
            .iter()
            .map(|r| r.coefs.iter().filter(|&&(_, a)| a < 0).map(|&(_, a)| a).sum())
            .collect();
        let rhs = p.rows.iter().map(|r| r.base_rhs).collect();
        Engine {
            p,
            val: vec![FREE; nb],
            minact,
            rhs,
            trail: Vec::new(),
            queue: Vec::new(),
            in_queue: vec![false; p.rows.len()],
            group_ones: vec![0; p.groups.len()],
            group_free: p.groups.iter().map(|g| g.len() as u32).collect(),
            free_count: nb,
            conflict_row: None,
        }
    }

    pub fn trail_len(&self) -> usize {
        self.trail.len()
    }

    pub fn trail(&self) -> &[usize] {
        &self.trail
    }

    fn enqueue(&mut self, r: usize) {
        if !self.in_queue[r] {
            self.in_queue[r] = true;
            self.queue.push(r as u32);
        }
    }

    pub fn enqueue_all(&mut self) {
        for r in 0..self.p.rows.len() {
            self.enqueue(r);
        }
    }

    pub fn enqueue_tightened(&mut self) {
        if let Some(r) = self.p.obj_row {
            self.enqueue(r);
        }
        for k in 0..self.p.cont.len() {
            for i in 0..self.p.cont[k].rows.len() {
                let r = self.p.cont[k].rows[i];
                self.enqueue(r);
            }
        }
    }

    /// Fixes a free binary and updates activities. Caller propagates.
    pub fn fix(&mut self, b: usize, one: bool) {
        debug_assert_eq!(self.val[b], FREE);
        self.val[b] = one as i8;
        self.trail.push(b);
        self.free_count -= 1;
        let p = self.p;
        for &(r, a) in &p.cols[b] {
            let r = r as usize;
            if one && a > 0 {
                self.minact[r] += a;
                self.enqueue(r);
            } else if !one && a < 0 {
                self.minact[r] -= a;
                self.enqueue(r);
            }
        }
        for &g in &p.group_of[b] {
            let g = g as usize;
            self.group_free[g] -= 1;
            if one {
                self.group_ones[g] += 1;
            }
        }
    }

    pub fn undo_to(&mut self, mark: usize) {
        let p = self.p;
        while self.trail.len() > mark {
            let b = self.trail.pop().unwrap();
            let one = self.val[b] == 1;
            for &(r, a) in &p.cols[b] {
                let r = r as usize;
                if one && a > 0 {
                    self.minact[r] -= a;
                } else if !one && a < 0 {
                    self.minact[r] += a;
                }
            }
            for &g in &p.group_of[b] {
                let g = g as usize;
                self.group_free[g] += 1;
                if one {
                    self.group_ones[g] -= 1;
                }
            }
            self.val[b] = FREE;
            self.free_count += 1;
        }
        for r in self.queue.drain(..) {
            self.in_queue[r as usize] = false;
        }
    }

    /// Runs queued rows to a fixpoint. Returns false on conflict.
    pub fn propagate(&mut self) -> bool {
        let p = self.p;
        while let Some(r) = self.queue.pop() {
            let r = r as usize;
            self.in_queue[r] = false;
            let slack = self.rhs[r] - self.minact[r];
            if slack < 0 {
                self.conflict_row = Some(r);
                for q in self.queue.drain(..) {
                    self.in_queue[q as usize] = false;
                }
                return false;
            }
            if p.rows[r].max_abs <= slack {
                continue;
            }
            for &(b, a) in &p.rows[r].coefs {
                if self.val[b] == FREE && a.abs() > slack {
                    self.fix(b, a < 0);
                }
            }
        }
        true
    }

    /// Tightens rows against an incumbent objective value (minimisation
    /// sense). Returns true when any right-hand side moved.
    pub fn tighten(&mut self, inc: Rational) -> bool {
        let p = self.p;
        let mut moved = false;
        let cont_floor: Rational = p.cont.iter().fold(Rational::zero(), |a, c| a + c.obj * c.lb);
        if let Some(r) = p.obj_row {
            let cap = (inc - cont_floor) * int(p.obj_scale);
            let new = (ceil(&cap) - 1).min(INF);
            if new < self.rhs[r] {
                self.rhs[r] = new;
                moved = true;
            }
        }
        for (k, c) in p.cont.iter().enumerate() {
            if !c.obj.is_positive() {
                continue;
            }
            let others = cont_floor - c.obj * c.lb;
            let u = (inc - p.bin_floor - others) / c.obj;
            for &r in &c.rows {
                let t = p.rows[r].cont.as_ref().unwrap();
                debug_assert_eq!(t.k, k);
                let lim = ceil(&(int(t.b) + int(t.s) * u)) - 1;
                if lim < self.rhs[r] {
                    self.rhs[r] = lim;
                    moved = true;
                }
            }
        }
        moved
    }

    /// Lower bound of continuous variable `k` under the current fixings.
    fn cont_lb(&self, k: usize) -> Rational {
        let c = &self.p.cont[k];
        let mut best = c.lb;
        for &r in &c.rows {
            let t = self.p.rows[r].cont.as_ref().unwrap();
            let need = Rational::new(self.minact[r] - t.b, t.s);
            if need > best {
                best = need;
            }
        }
        best
    }

    /// Objective lower bound of the current node (minimisation sense).
    pub fn bound(&self) -> Rational {
        let bin = match self.p.obj_row {
            Some(r) => Rational::new(self.minact[r], self.p.obj_scale),
            None => Rational::zero(),
        };
        self.p.cont.iter().enumerate().fold(bin, |acc, (k, c)| {
            if c.obj.is_zero() {
                acc
            } else {
                acc + c.obj * self.cont_lb(k)
            }
        })
    }

    /// Branching choice: a binary and the value to try first.
    pub fn select(&self, groups_first: bool) -> Option<(usize, bool)> {
        if self.free_count == 0 {
            return None;
        }
        if groups_first {
            let mut best: Option<(u32, usize)> = None;
            for g in 0..self.p.groups.len() {
                if self.group_ones[g] == 0 && self.group_free[g] > 0 {
                    let f = self.group_free[g];
                    if best.is_none_or(|(bf, _)| f < bf) {
                        best = Some((f, g));
                    }
                }
            }
            if let Some((_, g)) = best {
                let b = self.p.groups[g].iter().copied().find(|&b| self.val[b] == FREE).unwrap();
                return Some((b, true));
            }
        }
        let b = (0..self.val.len()).find(|&b| self.val[b] == FREE)?;
        Some((b, self.p.prefer_one[b]))
    }

    /// Builds the model assignment for a fully fixed state together with its
    /// objective in the model's own sense; `None` if the exact check fails.
    pub fn leaf(&self, model: &IpModel) -> Option<(Rational, Assignment)> {
        debug_assert_eq!(self.free_count, 0);
        let mut a = Assignment::zeros(model);
        for (b, &v) in self.p.var_of_bin.iter().enumerate() {
            if self.val[b] == 1 {
                a.set(v, int(1));
            }
        }
        for (k, c) in self.p.cont.iter().enumerate() {
            let value = self.cont_lb(k);
            if c.ub.is_some_and(|u| value > u) {
                return None;
            }
            a.set(c.var, value);
        }
        let ev = evaluate(model, &a);
        if !ev.feasible() {
            return None;
        }
        Some((ev.objective, a))
    }
}
