//! Exact linear programming over arbitrary-precision rationals.
//!
//! A dense two-phase tableau simplex with Bland's rule: deterministic,
//! immune to cycling, and exact. Arithmetic runs on a fixed-width rational
//! fast path (i128 numerator and denominator with overflow detection) and
//! transparently restarts on arbitrary-precision rationals if any value
//! outgrows it, so results are identical either way. Every returned
//! solution carries duals and is verified against the full optimality
//! conditions (primal and dual feasibility, matching objectives,
//! complementary slackness) before it is handed back, so a successful
//! solve is self-certifying.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use thiserror::Error;

pub type Rat = BigRational;

/// Convenience constructor for small rationals.
pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

pub fn rat_int(p: i64) -> Rat {
    Rat::from(BigInt::from(p))
}

/// Formats a rational as `p/q` in lowest terms, always with the slash.
pub fn format_rat(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `p/q` or a bare integer.
pub fn parse_rat(s: &str) -> Option<Rat> {
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(Rat::new(p, q))
        }
        None => {
            let p: BigInt = s.trim().parse().ok()?;
            Some(Rat::from(p))
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Rel {
    Le,
    Ge,
    Eq,
}

/// One linear constraint with sparse coefficients.
#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<(usize, Rat)>,
    pub rel: Rel,
    pub rhs: Rat,
}

impl Constraint {
    pub fn new(coeffs: Vec<(usize, Rat)>, rel: Rel, rhs: Rat) -> Self {
        Constraint { coeffs, rel, rhs }
    }
}

/// An exact linear program. Variables are indexed 0..num_vars; each is
/// either nonnegative or free according to `nonneg`.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    pub sense: Sense,
    pub num_vars: usize,
    /// sparse objective coefficients
    pub objective: Vec<(usize, Rat)>,
    pub constraints: Vec<Constraint>,
    pub nonneg: Vec<bool>,
    pub var_names: Vec<String>,
}

impl LinearProgram {
    pub fn new(sense: Sense, num_vars: usize) -> Self {
        LinearProgram {
            sense,
            num_vars,
            objective: Vec::new(),
            constraints: Vec::new(),
            nonneg: vec![true; num_vars],
            var_names: (0..num_vars).map(|i| format!("x{i}")).collect(),
        }
    }

    /// Renders the program in a readable `lp`-style text form.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let sense = match self.sense {
            Sense::Maximize => "maximize",
            Sense::Minimize => "minimize",
        };
        out.push_str(sense);
        out.push(' ');
        out.push_str(&self.render_terms(&self.objective));
        out.push('\n');
        for c in &self.constraints {
            let rel = match c.rel {
                Rel::Le => "<=",
                Rel::Ge => ">=",
                Rel::Eq => "=",
            };
            out.push_str(&format!(
                "  {} {} {}\n",
                self.render_terms(&c.coeffs),
                rel,
                format_rat(&c.rhs)
            ));
        }
        for (j, &nn) in self.nonneg.iter().enumerate() {
            if !nn {
                out.push_str(&format!("  {} free\n", self.var_names[j]));
            }
        }
        out
    }

    fn render_terms(&self, terms: &[(usize, Rat)]) -> String {
        if terms.is_empty() {
            return "0/1".to_string();
        }
        terms
            .iter()
            .map(|(j, c)| format!("{} {}", format_rat(c), self.var_names[*j]))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// A finite optimum together with its certificate.
#[derive(Clone, Debug)]
pub struct LpSolution {
    pub value: Rat,
    pub primal: Vec<Rat>,
    /// One multiplier per constraint, scaled so that
    /// sum_i duals[i] * rhs[i] equals `value` for the original sense.
    pub duals: Vec<Rat>,
    pub pivots: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LpError {
    #[error("infeasible; constraints {stuck_rows:?} cannot be satisfied (phase-one gap {gap})")]
    Infeasible { gap: String, stuck_rows: Vec<usize> },
    #[error("objective unbounded along a feasible ray")]
    Unbounded { ray: Vec<String> },
    #[error("pivot limit {0} exceeded")]
    PivotLimit(u64),
}

#[derive(Clone, Copy, Debug)]
pub struct SolverConfig {
    pub max_pivots: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            max_pivots: 10_000_000,
        }
    }
}

/// Solves the program exactly. See the module docs for the certification
/// performed on every returned solution.
pub fn solve_exact(lp: &LinearProgram) -> Result<LpSolution, LpError> {
    solve_exact_with(lp, SolverConfig::default())
}

pub fn solve_exact_with(lp: &LinearProgram, config: SolverConfig) -> Result<LpSolution, LpError> {
    let attempt = match Tableau::<SmallRat>::build(lp) {
        Some(t) => match t.solve(config) {
            Ok(done) => Some(done),
            Err(Halt::Overflow) => None,
            Err(Halt::Lp(e)) => return Err(e),
        },
        None => None,
    };
    let sol = match attempt {
        Some(sol) => sol,
        None => {
            // Fixed-width arithmetic overflowed somewhere; redo the whole
            // solve in arbitrary precision. Bland's rule is deterministic,
            // so the replay visits the same vertices.
            let t = Tableau::<Rat>::build(lp).expect("arbitrary precision cannot overflow");
            match t.solve(config) {
                Ok(sol) => sol,
                Err(Halt::Lp(e)) => return Err(e),
                Err(Halt::Overflow) => unreachable!("big rationals do not overflow"),
            }
        }
    };
    verify_optimal(lp, &sol);
    Ok(sol)
}

/// Arithmetic backend for the solver: exact rational operations that may
/// refuse (by returning None) when a value outgrows the representation.
/// Method names avoid the num_traits vocabulary so both sets stay callable
/// on concrete rationals.
trait Scalar: Clone + std::fmt::Debug {
    fn nil() -> Self;
    fn unit() -> Self;
    fn vanishes(&self) -> bool;
    fn positive(&self) -> bool;
    fn sign(&self) -> Ordering;
    fn cadd(&self, o: &Self) -> Option<Self>;
    fn csub(&self, o: &Self) -> Option<Self>;
    fn cmul(&self, o: &Self) -> Option<Self>;
    fn cdiv(&self, o: &Self) -> Option<Self>;
    fn cneg(&self) -> Self;
    fn cmp_exact(&self, o: &Self) -> Ordering;
    fn from_rat(r: &Rat) -> Option<Self>;
    fn to_rat(&self) -> Rat;
}

impl Scalar for Rat {
    fn nil() -> Self {
        Rat::zero()
    }
    fn unit() -> Self {
        Rat::one()
    }
    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }
    fn positive(&self) -> bool {
        Signed::is_positive(self)
    }
    fn sign(&self) -> Ordering {
        self.cmp(&Rat::zero())
    }
    fn cadd(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn csub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn cmul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn cdiv(&self, o: &Self) -> Option<Self> {
        Some(self / o)
    }
    fn cneg(&self) -> Self {
        -self
    }
    fn cmp_exact(&self, o: &Self) -> Ordering {
        self.cmp(o)
    }
    fn from_rat(r: &Rat) -> Option<Self> {
        Some(r.clone())
    }
    fn to_rat(&self) -> Rat {
        self.clone()
    }
}

/// Rational on i128 components, kept below 2^62 so that cross products
/// can never overflow i128; construction reduces lazily and reports
/// irreducibly large values as None.
#[derive(Clone, Copy, Debug)]
struct SmallRat {
    n: i128,
    /// always positive
    d: i128,
}

const SMALL_LIMIT: i128 = 1 << 62;

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl SmallRat {
    fn make(n: i128, d: i128) -> Option<SmallRat> {
        debug_assert!(d != 0);
        let (mut n, mut d) = if d < 0 { (-n, -d) } else { (n, d) };
        if n == 0 {
            return Some(SmallRat { n: 0, d: 1 });
        }
        if n.unsigned_abs() >= SMALL_LIMIT as u128 || d >= SMALL_LIMIT {
            let g = gcd_u128(n.unsigned_abs(), d as u128) as i128;
            n /= g;
            d /= g;
            if n.unsigned_abs() >= SMALL_LIMIT as u128 || d >= SMALL_LIMIT {
                return None;
            }
        }
        Some(SmallRat { n, d })
    }
}

impl Scalar for SmallRat {
    fn nil() -> Self {
        SmallRat { n: 0, d: 1 }
    }
    fn unit() -> Self {
        SmallRat { n: 1, d: 1 }
    }
    fn vanishes(&self) -> bool {
        self.n == 0
    }
    fn positive(&self) -> bool {
        self.n > 0
    }
    fn sign(&self) -> Ordering {
        self.n.cmp(&0)
    }
    fn cadd(&self, o: &Self) -> Option<Self> {
        SmallRat::make(self.n * o.d + o.n * self.d, self.d * o.d)
    }
    fn csub(&self, o: &Self) -> Option<Self> {
        SmallRat::make(self.n * o.d - o.n * self.d, self.d * o.d)
    }
    fn cmul(&self, o: &Self) -> Option<Self> {
        SmallRat::make(self.n * o.n, self.d * o.d)
    }
    fn cdiv(&self, o: &Self) -> Option<Self> {
        debug_assert!(o.n != 0);
        SmallRat::make(self.n * o.d, self.d * o.n)
    }
    fn cneg(&self) -> Self {
        SmallRat {
            n: -self.n,
            d: self.d,
        }
    }
    fn cmp_exact(&self, o: &Self) -> Ordering {
        (self.n * o.d).cmp(&(o.n * self.d))
    }
    fn from_rat(r: &Rat) -> Option<Self> {
        let n = r.numer().to_i128()?;
        let d = r.denom().to_i128()?;
        SmallRat::make(n, d)
    }
    fn to_rat(&self) -> Rat {
        Rat::new(BigInt::from(self.n), BigInt::from(self.d))
    }
}

/// Why a generic solve stopped early.
enum Halt {
    Lp(LpError),
    Overflow,
}

impl From<LpError> for Halt {
    fn from(e: LpError) -> Self {
        Halt::Lp(e)
    }
}

/// Shorthand: lift an arithmetic result, treating None as overflow.
macro_rules! ar {
    ($e:expr) => {
        $e.ok_or(Halt::Overflow)?
    };
}

/// Column roles in the tableau.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Col {
    /// positive part of an original variable
    Plus(usize),
    /// negative part (free variables only)
    Minus(usize),
    /// slack (+1) or surplus (-1) of a row, with its sign
    Slack(usize, bool),
    Artificial(usize),
}

struct Tableau<R: Scalar> {
    /// m rows of coefficient cells, kept equal-length with `cols`
    rows: Vec<Vec<R>>,
    rhs: Vec<R>,
    cols: Vec<Col>,
    /// basis[i]: column index basic in row i
    basis: Vec<usize>,
    /// row i was multiplied by -1 during normalization
    flipped: Vec<bool>,
    num_vars: usize,
    /// maximize objective over columns (original problem converted to max)
    max_objective: Vec<R>,
    /// true when the original sense was Minimize
    negated: bool,
    pivots: u64,
}

impl<R: Scalar> Tableau<R> {
    /// None when the input coefficients do not fit the backend.
    fn build(lp: &LinearProgram) -> Option<Tableau<R>> {
        let m = lp.constraints.len();
        let mut col_of_plus = vec![usize::MAX; lp.num_vars];
        let mut col_of_minus = vec![usize::MAX; lp.num_vars];
        let mut cols: Vec<Col> = Vec::new();
        for (j, &nn) in lp.nonneg.iter().enumerate() {
            col_of_plus[j] = cols.len();
            cols.push(Col::Plus(j));
            if !nn {
                col_of_minus[j] = cols.len();
                cols.push(Col::Minus(j));
            }
        }
        let mut row_sign: Vec<bool> = Vec::with_capacity(m);
        let mut row_rel: Vec<Rel> = Vec::with_capacity(m);
        for c in &lp.constraints {
            let flip = c.rhs.is_negative();
            let rel = match (c.rel, flip) {
                (Rel::Le, true) => Rel::Ge,
                (Rel::Ge, true) => Rel::Le,
                (r, _) => r,
            };
            row_sign.push(flip);
            row_rel.push(rel);
        }
        let mut slack_col = vec![usize::MAX; m];
        for (i, rel) in row_rel.iter().enumerate() {
            match rel {
                Rel::Le => {
                    slack_col[i] = cols.len();
                    cols.push(Col::Slack(i, true));
                }
                Rel::Ge => {
                    slack_col[i] = cols.len();
                    cols.push(Col::Slack(i, false));
                }
                Rel::Eq => {}
            }
        }
        let mut art_col = vec![usize::MAX; m];
        for (i, rel) in row_rel.iter().enumerate() {
            if matches!(rel, Rel::Ge | Rel::Eq) {
                art_col[i] = cols.len();
                cols.push(Col::Artificial(i));
            }
        }
        let total = cols.len();
        let mut rows = vec![vec![R::nil(); total]; m];
        let mut rhs = vec![R::nil(); m];
        let mut basis = vec![usize::MAX; m];
        for (i, c) in lp.constraints.iter().enumerate() {
            for (j, coef) in &c.coeffs {
                let mut v = R::from_rat(coef)?;
                if row_sign[i] {
                    v = v.cneg();
                }
                rows[i][col_of_plus[*j]] = rows[i][col_of_plus[*j]].cadd(&v)?;
                if !lp.nonneg[*j] {
                    let mk = col_of_minus[*j];
                    rows[i][mk] = rows[i][mk].csub(&v)?;
                }
            }
            let mut b = R::from_rat(&c.rhs)?;
            if row_sign[i] {
                b = b.cneg();
            }
            debug_assert!(!matches!(b.sign(), Ordering::Less));
            rhs[i] = b;
        }
        for i in 0..m {
            if slack_col[i] != usize::MAX {
                let positive = matches!(row_rel[i], Rel::Le);
                rows[i][slack_col[i]] = if positive { R::unit() } else { R::unit().cneg() };
                if positive {
                    basis[i] = slack_col[i];
                }
            }
            if art_col[i] != usize::MAX {
                rows[i][art_col[i]] = R::unit();
                basis[i] = art_col[i];
            }
        }
        debug_assert!(basis.iter().all(|&b| b != usize::MAX));
        let negated = lp.sense == Sense::Minimize;
        let mut max_objective = vec![R::nil(); total];
        for (j, coef) in &lp.objective {
            let mut c = R::from_rat(coef)?;
            if negated {
                c = c.cneg();
            }
            max_objective[col_of_plus[*j]] = max_objective[col_of_plus[*j]].cadd(&c)?;
            if !lp.nonneg[*j] {
                let mk = col_of_minus[*j];
                max_objective[mk] = max_objective[mk].csub(&c)?;
            }
        }
        Some(Tableau {
            rows,
            rhs,
            cols,
            basis,
            flipped: row_sign,
            num_vars: lp.num_vars,
            max_objective,
            negated,
            pivots: 0,
        })
    }

    fn pivot(&mut self, r: usize, c: usize) -> Result<(), Halt> {
        let pivot_val = self.rows[r][c].clone();
        debug_assert!(!pivot_val.vanishes());
        if pivot_val.cmp_exact(&R::unit()) != Ordering::Equal {
            for cell in self.rows[r].iter_mut() {
                if !cell.vanishes() {
                    *cell = ar!(cell.cdiv(&pivot_val));
                }
            }
            self.rhs[r] = ar!(self.rhs[r].cdiv(&pivot_val));
        }
        let pivot_row = std::mem::take(&mut self.rows[r]);
        let pivot_rhs = self.rhs[r].clone();
        let mut halted = None;
        for i in 0..self.rows.len() {
            if i == r {
                continue;
            }
            let factor = self.rows[i][c].clone();
            if factor.vanishes() {
                continue;
            }
            for (cell, p) in self.rows[i].iter_mut().zip(&pivot_row) {
                if p.vanishes() {
                    continue;
                }
                match p.cmul(&factor).and_then(|t| cell.csub(&t)) {
                    Some(v) => *cell = v,
                    None => {
                        halted = Some(Halt::Overflow);
                        break;
                    }
                }
            }
            if halted.is_some() {
                break;
            }
            match pivot_rhs.cmul(&factor).and_then(|t| self.rhs[i].csub(&t)) {
                Some(v) => self.rhs[i] = v,
                None => {
                    halted = Some(Halt::Overflow);
                    break;
                }
            }
        }
        self.rows[r] = pivot_row;
        if let Some(h) = halted {
            return Err(h);
        }
        self.basis[r] = c;
        self.pivots += 1;
        Ok(())
    }

    /// Reduced profit c_j - z_j for the given objective; entering columns
    /// are the ones where it is positive.
    fn reduced_profits(&self, objective: &[R]) -> Result<Vec<R>, Halt> {
        let total = self.cols.len();
        let mut z = vec![R::nil(); total];
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = &objective[b];
            if cb.vanishes() {
                continue;
            }
            for (j, cell) in self.rows[i].iter().enumerate() {
                if !cell.vanishes() {
                    z[j] = ar!(z[j].cadd(&ar!(cb.cmul(cell))));
                }
            }
        }
        let mut out = Vec::with_capacity(total);
        for j in 0..total {
            out.push(ar!(objective[j].csub(&z[j])));
        }
        Ok(out)
    }

    /// Bland's rule: entering = lowest-index improving column; leaving =
    /// minimum ratio with lowest basic index on ties.
    fn run_phase(
        &mut self,
        objective: &[R],
        allow_artificial: bool,
        config: &SolverConfig,
    ) -> Result<(), Halt> {
        loop {
            if self.pivots > config.max_pivots {
                return Err(LpError::PivotLimit(config.max_pivots).into());
            }
            let profits = self.reduced_profits(objective)?;
            let entering = (0..self.cols.len()).find(|&j| {
                (allow_artificial || !matches!(self.cols[j], Col::Artificial(_)))
                    && profits[j].positive()
            });
            let Some(e) = entering else {
                return Ok(());
            };
            let mut leave: Option<(usize, R)> = None;
            for i in 0..self.rows.len() {
                if !self.rows[i][e].positive() {
                    continue;
                }
                let ratio = ar!(self.rhs[i].cdiv(&self.rows[i][e]));
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => match ratio.cmp_exact(lr) {
                        Ordering::Less => true,
                        Ordering::Equal => self.basis[i] < self.basis[*li],
                        Ordering::Greater => false,
                    },
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, e)?,
                None => {
                    return Err(LpError::Unbounded {
                        ray: self.extract_ray(e),
                    }
                    .into())
                }
            }
        }
    }

    fn extract_ray(&self, entering: usize) -> Vec<String> {
        let mut dir = vec![Rat::zero(); self.num_vars];
        let mut apply = |col: &Col, delta: Rat| match *col {
            Col::Plus(j) => dir[j] += delta,
            Col::Minus(j) => dir[j] -= delta,
            _ => {}
        };
        apply(&self.cols[entering], Rat::one());
        for (i, &b) in self.basis.iter().enumerate() {
            let step = self.rows[i][entering].to_rat();
            if !Zero::is_zero(&step) {
                apply(&self.cols[b], -step);
            }
        }
        dir.iter().map(format_rat).collect()
    }

    fn solve(mut self, config: SolverConfig) -> Result<LpSolution, Halt> {
        let total = self.cols.len();
        let has_artificials = self.cols.iter().any(|c| matches!(c, Col::Artificial(_)));
        if has_artificials {
            let mut phase1 = vec![R::nil(); total];
            for (j, c) in self.cols.iter().enumerate() {
                if matches!(c, Col::Artificial(_)) {
                    phase1[j] = R::unit().cneg();
                }
            }
            self.run_phase(&phase1, true, &config)?;
            let mut infeasibility = R::nil();
            let mut stuck: Vec<usize> = Vec::new();
            for (i, &b) in self.basis.iter().enumerate() {
                if matches!(self.cols[b], Col::Artificial(_)) && self.rhs[i].positive() {
                    infeasibility = ar!(infeasibility.cadd(&self.rhs[i]));
                    stuck.push(i);
                }
            }
            if infeasibility.positive() {
                return Err(LpError::Infeasible {
                    gap: format_rat(&infeasibility.to_rat()),
                    stuck_rows: stuck,
                }
                .into());
            }
            // Pivot zero-valued artificials out of the basis where a
            // structural column is available. Rows where none is have an
            // all-zero structural part: they are inert from here on (the
            // pivot-column entry is always zero), and their basic
            // artificial keeps reduced profit zero, so the extracted dual
            // for such a redundant row is exactly zero.
            for i in 0..self.rows.len() {
                if !matches!(self.cols[self.basis[i]], Col::Artificial(_)) {
                    continue;
                }
                debug_assert!(self.rhs[i].vanishes());
                let replacement = (0..total).find(|&j| {
                    !matches!(self.cols[j], Col::Artificial(_)) && !self.rows[i][j].vanishes()
                });
                if let Some(j) = replacement {
                    self.pivot(i, j)?;
                }
            }
        }
        let objective = self.max_objective.clone();
        self.run_phase(&objective, false, &config)?;

        let mut primal = vec![Rat::zero(); self.num_vars];
        for (i, &b) in self.basis.iter().enumerate() {
            match self.cols[b] {
                Col::Plus(j) => primal[j] += self.rhs[i].to_rat(),
                Col::Minus(j) => primal[j] -= self.rhs[i].to_rat(),
                _ => {}
            }
        }
        // Duals read off the identity-carrier columns. A carrier holding
        // sigma * e_i for row i has z = sigma * y_i and zero cost, so
        // y_i = -profit * sigma; adjust for the row's normalization sign
        // and for a negated (minimized) objective.
        let profits = self.reduced_profits(&objective)?;
        let mut duals = vec![Rat::zero(); self.rows.len()];
        for (j, col) in self.cols.iter().enumerate() {
            let (row, positive_carrier) = match *col {
                Col::Slack(i, positive) => (i, positive),
                Col::Artificial(i) => (i, true),
                _ => continue,
            };
            let y = profits[j].cneg().to_rat();
            duals[row] = if positive_carrier { y } else { -y };
        }
        for (i, flip) in self.flipped.iter().enumerate() {
            if *flip {
                duals[i] = -duals[i].clone();
            }
        }
        let mut value = Rat::zero();
        for (i, &b) in self.basis.iter().enumerate() {
            if !objective[b].vanishes() {
                value += objective[b].to_rat() * self.rhs[i].to_rat();
            }
        }
        if self.negated {
            value = -value;
            for d in duals.iter_mut() {
                *d = -d.clone();
            }
        }
        Ok(LpSolution {
            value,
            primal,
            duals,
            pivots: self.pivots,
        })
    }
}

/// Asserts the optimality conditions for linear programs: primal and dual
/// feasibility, equal objectives, and complementary slackness. Panics on
/// violation; a passing check certifies optimality.
fn verify_optimal(lp: &LinearProgram, sol: &LpSolution) {
    let activity = |c: &Constraint| -> Rat {
        c.coeffs
            .iter()
            .map(|(j, coef)| coef * &sol.primal[*j])
            .sum()
    };
    for (j, &nn) in lp.nonneg.iter().enumerate() {
        assert!(
            !nn || !sol.primal[j].is_negative(),
            "negative value for nonnegative variable {j}"
        );
    }
    for (i, c) in lp.constraints.iter().enumerate() {
        let a = activity(c);
        let ok = match c.rel {
            Rel::Le => a <= c.rhs,
            Rel::Ge => a >= c.rhs,
            Rel::Eq => a == c.rhs,
        };
        assert!(ok, "primal violates constraint {i}");
        // Dual sign convention (for the stated sense) and slackness.
        let d = &sol.duals[i];
        let sign_ok = match (lp.sense, c.rel) {
            (_, Rel::Eq) => true,
            (Sense::Maximize, Rel::Le) | (Sense::Minimize, Rel::Ge) => !d.is_negative(),
            (Sense::Maximize, Rel::Ge) | (Sense::Minimize, Rel::Le) => !d.is_positive(),
        };
        assert!(sign_ok, "dual multiplier for constraint {i} has wrong sign");
        assert!(
            Zero::is_zero(d) || a == c.rhs,
            "nonzero dual on a slack constraint {i}"
        );
    }
    let mut obj = Rat::zero();
    for (j, coef) in &lp.objective {
        obj += coef * &sol.primal[*j];
    }
    assert_eq!(obj, sol.value, "objective mismatch");
    let dual_value: Rat = lp
        .constraints
        .iter()
        .zip(&sol.duals)
        .map(|(c, d)| &c.rhs * d)
        .sum();
    assert_eq!(dual_value, sol.value, "strong duality violated");
    // Reduced costs: sum_i y_i a_ij compared against c_j.
    let mut col_activity = vec![Rat::zero(); lp.num_vars];
    for (c, d) in lp.constraints.iter().zip(&sol.duals) {
        if Zero::is_zero(d) {
            continue;
        }
        for (j, coef) in &c.coeffs {
            col_activity[*j] += coef * d;
        }
    }
    let mut cvec = vec![Rat::zero(); lp.num_vars];
    for (j, coef) in &lp.objective {
        cvec[*j] += coef.clone();
    }
    for j in 0..lp.num_vars {
        let s = &col_activity[j];
        let c = &cvec[j];
        let feasible = match (lp.sense, lp.nonneg[j]) {
            (_, false) => s == c,
            (Sense::Maximize, true) => s >= c,
            (Sense::Minimize, true) => s <= c,
        };
        assert!(feasible, "dual infeasible at variable {j}");
        assert!(
            Zero::is_zero(&sol.primal[j]) || s == c,
            "complementary slackness violated at variable {j}"
        );
    }
}

/// Exhaustive rational vertex enumeration, used as an independent
/// optimum oracle for small bounded-feasible programs.
pub(crate) fn vertex_enumeration_optimum(lp: &LinearProgram) -> Option<Rat> {
    let n = lp.num_vars;
    let mut planes: Vec<(Vec<Rat>, Rat)> = Vec::new();
    for c in &lp.constraints {
        let mut row = vec![Rat::zero(); n];
        for (j, coef) in &c.coeffs {
            row[*j] += coef.clone();
        }
        planes.push((row, c.rhs.clone()));
    }
    for j in 0..n {
        let mut row = vec![Rat::zero(); n];
        row[j] = Rat::one();
        planes.push((row, Rat::zero()));
    }
    let feasible = |x: &[Rat]| -> bool {
        lp.nonneg
            .iter()
            .enumerate()
            .all(|(j, &nn)| !nn || !x[j].is_negative())
            && lp.constraints.iter().all(|c| {
                let a: Rat = c.coeffs.iter().map(|(j, coef)| coef * &x[*j]).sum();
                match c.rel {
                    Rel::Le => a <= c.rhs,
                    Rel::Ge => a >= c.rhs,
                    Rel::Eq => a == c.rhs,
                }
            })
    };
    let mut best: Option<Rat> = None;
    let idx: Vec<usize> = (0..planes.len()).collect();
    for combo in combinations(&idx, n) {
        let system: Vec<(Vec<Rat>, Rat)> = combo.iter().map(|&i| planes[i].clone()).collect();
        if let Some(x) = solve_square(&system) {
            if feasible(&x) {
                let v: Rat = lp.objective.iter().map(|(j, c)| c * &x[*j]).sum();
                let better = match (&best, lp.sense) {
                    (None, _) => true,
                    (Some(b), Sense::Maximize) => v > *b,
                    (Some(b), Sense::Minimize) => v < *b,
                };
                if better {
                    best = Some(v);
                }
            }
        }
    }
    best
}

fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if items.len() < k {
        return Vec::new();
    }
    let mut out = Vec::new();
    for (i, &first) in items.iter().enumerate() {
        for mut rest in combinations(&items[i + 1..], k - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn solve_square(system: &[(Vec<Rat>, Rat)]) -> Option<Vec<Rat>> {
    let n = system.len();
    let mut a: Vec<Vec<Rat>> = system.iter().map(|(row, _)| row.clone()).collect();
    let mut b: Vec<Rat> = system.iter().map(|(_, rhs)| rhs.clone()).collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !Zero::is_zero(&a[r][col]))?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = a[col][col].clone().recip();
        for v in a[col].iter_mut() {
            *v *= inv.clone();
        }
        b[col] *= inv;
        for r in 0..n {
            if r != col && !Zero::is_zero(&a[r][col]) {
                let f = a[r][col].clone();
                for cidx in 0..n {
                    let upd = &a[col][cidx] * &f;
                    a[r][cidx] -= upd;
                }
                let upd = &b[col] * &f;
                b[r] -= upd;
            }
        }
    }
    Some(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp_max(num_vars: usize, objective: &[i64], rows: &[(&[i64], Rel, i64)]) -> LinearProgram {
        let mut lp = LinearProgram::new(Sense::Maximize, num_vars);
        lp.objective = objective
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(j, &c)| (j, rat_int(c)))
            .collect();
        for (coeffs, rel, rhs) in rows {
            lp.constraints.push(Constraint::new(
                coeffs
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| c != 0)
                    .map(|(j, &c)| (j, rat_int(c)))
                    .collect(),
                *rel,
                rat_int(*rhs),
            ));
        }
        lp
    }

    #[test]
    fn simple_max() {
        // max x + y, x <= 2, y <= 3, x + y <= 4
        let lp = lp_max(
            2,
            &[1, 1],
            &[
                (&[1, 0], Rel::Le, 2),
                (&[0, 1], Rel::Le, 3),
                (&[1, 1], Rel::Le, 4),
            ],
        );
        let sol = solve_exact(&lp).unwrap();
        assert_eq!(sol.value, rat_int(4));
    }

    #[test]
    fn minimize_with_ge_rows() {
        // min x + y, x + 2y >= 4, 3x + y >= 6: optimum at (8/5, 6/5), value 14/5.
        let mut lp = lp_max(2, &[1, 1], &[(&[1, 2], Rel::Ge, 4), (&[3, 1], Rel::Ge, 6)]);
        lp.sense = Sense::Minimize;
        let sol = solve_exact(&lp).unwrap();
        assert_eq!(sol.value, rat(14, 5));
        assert_eq!(sol.primal, vec![rat(8, 5), rat(6, 5)]);
    }

    #[test]
    fn equality_rows_and_free_variables() {
        // max y subject to x + y = 1, x - y = 0 with x, y free: unique
        // point (1/2, 1/2).
        let mut lp = lp_max(2, &[0, 1], &[(&[1, 1], Rel::Eq, 1), (&[1, -1], Rel::Eq, 0)]);
        lp.nonneg = vec![false, false];
        let sol = solve_exact(&lp).unwrap();
        assert_eq!(sol.value, rat(1, 2));
        assert_eq!(sol.primal, vec![rat(1, 2), rat(1, 2)]);
    }

    #[test]
    fn infeasible_reported_with_rows() {
        let lp = lp_max(1, &[1], &[(&[1], Rel::Ge, 3), (&[1], Rel::Le, 1)]);
        match solve_exact(&lp) {
            Err(LpError::Infeasible { stuck_rows, .. }) => assert!(!stuck_rows.is_empty()),
            other => panic!("expected infeasible, got {other:?}"),
        }
    }

    #[test]
    fn unbounded_reports_ray() {
        let lp = lp_max(2, &[1, 0], &[(&[0, 1], Rel::Le, 1)]);
        match solve_exact(&lp) {
            Err(LpError::Unbounded { ray }) => assert_eq!(ray[0], "1/1"),
            other => panic!("expected unbounded, got {other:?}"),
        }
    }

    #[test]
    fn negative_rhs_normalization() {
        // max -x - y with x + y >= -1 written as -x - y <= 1; optimum 0.
        let lp = lp_max(2, &[-1, -1], &[(&[-1, -1], Rel::Le, 1)]);
        let sol = solve_exact(&lp).unwrap();
        assert_eq!(sol.value, rat_int(0));
    }

    #[test]
    fn degenerate_redundant_equalities() {
        // x = 1 stated twice plus an implied row; Bland must not cycle and
        // redundant-row handling must cope.
        let lp = lp_max(
            2,
            &[1, 1],
            &[
                (&[1, 0], Rel::Eq, 1),
                (&[1, 0], Rel::Eq, 1),
                (&[2, 0], Rel::Eq, 2),
                (&[0, 1], Rel::Le, 5),
            ],
        );
        let sol = solve_exact(&lp).unwrap();
        assert_eq!(sol.value, rat_int(6));
    }

    #[test]
    fn overflow_falls_back_to_big_rationals() {
        // Coefficients beyond i128 force the arbitrary-precision path on
        // construction; the optimum is still exact.
        let huge = Rat::from(BigInt::from(1u8) << 200);
        let mut lp = LinearProgram::new(Sense::Maximize, 1);
        lp.objective = vec![(0, rat_int(1))];
        lp.constraints = vec![Constraint::new(vec![(0, rat_int(1))], Rel::Le, huge.clone())];
        let sol = solve_exact(&lp).unwrap();
        assert_eq!(sol.value, huge);
    }

    #[test]
    fn matches_vertex_enumeration_on_random_programs() {
        // 100 seeded random bounded programs: x >= 0, box x_j <= 3, random
        // Le rows with nonnegative rhs keep the origin feasible.
        let mut state = 0x243f6a8885a308d3u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _case in 0..100 {
            let n = 2 + (next() % 2) as usize; // 2..=3 variables
            let m = 2 + (next() % 3) as usize; // 2..=4 extra rows
            let mut lp = LinearProgram::new(
                if next() % 2 == 0 {
                    Sense::Maximize
                } else {
                    Sense::Minimize
                },
                n,
            );
            lp.objective = (0..n)
                .map(|j| (j, rat_int((next() % 7) as i64 - 3)))
                .collect();
            for j in 0..n {
                lp.constraints
                    .push(Constraint::new(vec![(j, rat_int(1))], Rel::Le, rat_int(3)));
            }
            for _ in 0..m {
                let coeffs: Vec<(usize, Rat)> = (0..n)
                    .map(|j| (j, rat_int((next() % 7) as i64 - 3)))
                    .collect();
                lp.constraints
                    .push(Constraint::new(coeffs, Rel::Le, rat_int((next() % 4) as i64)));
            }
            let sol = solve_exact(&lp).expect("bounded feasible by construction");
            let oracle = vertex_enumeration_optimum(&lp).expect("feasible");
            assert_eq!(sol.value, oracle);
        }
    }

    #[test]
    fn dump_renders_rationals_with_slash() {
        let mut lp = lp_max(1, &[1], &[(&[2], Rel::Le, 3)]);
        lp.constraints[0].rhs = rat(3, 2);
        let dump = lp.dump();
        assert!(dump.contains("3/2"));
        assert!(dump.starts_with("maximize"));
    }

    #[test]
    fn rational_formatting() {
        assert_eq!(format_rat(&rat(5, 2)), "5/2");
        assert_eq!(format_rat(&rat_int(3)), "3/1");
        assert_eq!(format_rat(&rat(-1, 3)), "-1/3");
        assert_eq!(parse_rat("5/2"), Some(rat(5, 2)));
        assert_eq!(parse_rat("7"), Some(rat_int(7)));
        assert_eq!(parse_rat("1/0"), None);
    }

    #[test]
    fn small_rational_arithmetic_reduces_and_guards() {
        let a = SmallRat::make(6, 4).unwrap();
        assert_eq!((a.n, a.d), (6, 4)); // reduction is lazy below the limit
        let b = SmallRat::make(1, 3).unwrap();
        let sum = a.cadd(&b).unwrap();
        assert_eq!(sum.to_rat(), rat(11, 6));
        assert_eq!(a.cmp_exact(&b), Ordering::Greater);
        // A value that cannot reduce below the limit is refused.
        let p = (1i128 << 62) + 1; // odd, so gcd with a power of two is 1
        assert!(SmallRat::make(p, 2).is_none());
        // ... but a reducible one passes.
        assert!(SmallRat::make(1 << 63, 1 << 62).is_some());
    }
}
