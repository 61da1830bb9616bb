use crate::output::{jnum, num, Output};
use crate::{CliError, CliResult};
use clap::{Args, Subcommand, ValueEnum};
use hecke_core::action::{hecke_points, orbit_table, FiniteLevelFn, HPoint};
use hecke_core::algebra::{hecke_mul, hecke_star, hecke_to_operator, representation_holds, HeckeElement};
use hecke_core::arith::{gcd_u64, primes_up_to};
use hecke_core::coset::{double_coset_nf, r_gamma, right_coset_reps, DoubleCosetNF};
use hecke_core::exact::{rat_to_f64, rat_to_string, Mat2Q, Rat};
use hecke_core::kms::{
    beta1_haar_cell, beta1_scaling_factor, cell_kind, cell_mass, mass_yf, phase_csv, phase_scan,
    stratum_mass, CellKind, LocalMeasureSpec, LocalSampler, SplitMix64,
};
use hecke_core::lab::{
    box_test_set, character_damping, dense_projection, equidist_discrepancy, equidist_trend,
    invariance_defect, project_invariants, projection_on_units, singular_quadratic_roots,
    trend_csv, verify_singular_hecke, DirichletCharacter, TestFunction,
};
use hecke_core::zeta::{closed_form, zeta_bruteforce, zeta_finite_set, zeta_global, zeta_local, SemigroupSpec};
use serde_json::{json, Value};

pub struct Ctx {
    pub exact: bool,
    pub seed: u64,
}

fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(msg.into()))
}

fn rat_out(x: &Rat, exact: bool) -> Value {
    if exact {
        rat_to_string(x).into()
    } else {
        jnum(rat_to_f64(x))
    }
}

#[derive(Args, Debug, Clone)]
pub struct CosetArg {
    /// Coset as r:n, e.g. 1:12 or 1/2:6.
    #[arg(long)]
    coset: Option<String>,
    /// First elementary divisor of an integral coset diag(a, d).
    #[arg(long)]
    a: Option<u64>,
    /// Second elementary divisor, a multiple of a.
    #[arg(long)]
    d: Option<u64>,
}

impl CosetArg {
    fn resolve(&self) -> CliResult<DoubleCosetNF> {
        match (&self.coset, self.a, self.d) {
            (Some(s), None, None) => Ok(DoubleCosetNF::parse_short(s)?),
            (None, Some(a), Some(d)) => Ok(DoubleCosetNF::integral(a, d)?),
            _ => usage("give either --coset r:n or both --a and --d"),
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct TauArg {
    /// Real part of τ.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    tau_x: f64,
    /// Imaginary part of τ.
    #[arg(long, default_value_t = 2.0)]
    tau_y: f64,
}

impl TauArg {
    fn point(&self) -> CliResult<HPoint> {
        Ok(HPoint::new(self.tau_x, self.tau_y)?)
    }
}

#[derive(Args, Debug, Clone)]
pub struct PrimeArg {
    /// Explicit primes, comma separated.
    #[arg(long, value_delimiter = ',')]
    primes: Vec<u64>,
    /// Use every prime up to this bound.
    #[arg(long)]
    prime_cutoff: Option<u64>,
}

impl PrimeArg {
    fn resolve(&self) -> CliResult<Vec<u64>> {
        match (self.primes.is_empty(), self.prime_cutoff) {
            (false, None) => Ok(self.primes.clone()),
            (true, Some(c)) => Ok(primes_up_to(c)),
            _ => usage("give either --primes or --prime-cutoff"),
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum CosetsCmd {
    /// Normal form diag(r, rn) with SL2(Z) witnesses of a matrix with det > 0.
    Nf {
        /// Matrix as JSON, e.g. [[1,2],[3,4]] or [["1/2",0],[0,1]].
        #[arg(long)]
        matrix: String,
    },
    /// Right coset representatives.
    Reps(CosetArg),
    /// Number of right cosets R_Γ.
    Index(CosetArg),
}

#[derive(Subcommand, Debug)]
pub enum HeckeCmd {
    /// Convolution product.
    Mul {
        #[arg(long)]
        lhs: String,
        #[arg(long)]
        rhs: String,
    },
    /// Involution f*(g) = conj f(g^-1).
    Star {
        #[arg(long)]
        element: String,
    },
    /// Checks that the product maps to the product of operators on M2(Z/N).
    Repcheck {
        #[arg(long)]
        lhs: String,
        #[arg(long)]
        rhs: String,
        #[arg(long, default_value_t = 6)]
        modulus: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TestSet {
    Boxes,
    Constant,
}

impl TestSet {
    fn functions(self) -> Vec<TestFunction> {
        match self {
            TestSet::Boxes => box_test_set(),
            TestSet::Constant => vec![TestFunction::Constant { value: 1.0 }],
        }
    }
}

/// Hecke elements are given as JSON term lists or as comma-separated r:n basis cosets.
fn parse_element(s: &str) -> CliResult<HeckeElement> {
    let t = s.trim();
    if t.starts_with('[') {
        let v: Value = serde_json::from_str(t).map_err(|e| CliError::Usage(format!("bad element JSON: {e}")))?;
        return Ok(HeckeElement::from_json_value(&v)?);
    }
    let mut out = HeckeElement::zero();
    for part in t.split(',') {
        out = out.add(&HeckeElement::basis(DoubleCosetNF::parse_short(part)?));
    }
    Ok(out)
}

#[derive(Subcommand, Debug)]
pub enum ZetaCmd {
    /// Local factor over S_p.
    Local {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        beta: f64,
    },
    /// Product of local factors over a finite prime set.
    Finite {
        #[command(flatten)]
        primes: PrimeArg,
        #[arg(long)]
        beta: f64,
    },
    /// ζ(β)ζ(β−1) for all of M2+(Z).
    Global {
        #[arg(long)]
        beta: f64,
    },
    /// Direct summation against the closed form.
    Brute {
        /// local:P, finite:P1;P2;... or full.
        #[arg(long, default_value = "full")]
        semigroup: String,
        #[arg(long, value_delimiter = ',', required = true)]
        beta: Vec<f64>,
        #[arg(long)]
        det_bound: u64,
    },
}

fn parse_semigroup(s: &str) -> CliResult<SemigroupSpec> {
    let spec = match s.split_once(':') {
        None if s == "full" => SemigroupSpec::Full,
        Some(("local", p)) => SemigroupSpec::Local(
            p.parse().map_err(|_| CliError::Usage(format!("bad prime in {s:?}")))?,
        ),
        Some(("finite", ps)) => SemigroupSpec::FiniteSet(
            ps.split(';')
                .map(|p| p.trim().parse())
                .collect::<Result<_, _>>()
                .map_err(|_| CliError::Usage(format!("bad prime list in {s:?}")))?,
        ),
        _ => return usage(format!("semigroup must be local:P, finite:P1;P2 or full, got {s:?}")),
    };
    spec.validate()?;
    Ok(spec)
}

#[derive(Args, Debug, Clone)]
pub struct LocalArg {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    beta: f64,
    /// Level: cells are residues modulo p^k.
    #[arg(long, default_value_t = 1)]
    k: u32,
}

impl LocalArg {
    fn spec(&self) -> CliResult<LocalMeasureSpec> {
        Ok(LocalMeasureSpec::new(self.p, self.beta, self.k)?)
    }
}

fn parse_ints<const N: usize>(s: &str, what: &str) -> CliResult<[i64; N]> {
    let v: Vec<i64> = s
        .split(',')
        .map(|x| x.trim().parse())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::Usage(format!("{what} must be {N} comma-separated integers")))?;
    v.try_into()
        .map_err(|_| CliError::Usage(format!("{what} must be {N} comma-separated integers")))
}

#[derive(Subcommand, Debug)]
pub enum MeasureCmd {
    /// Mass of the stratum diag(p^a, p^b).
    Stratum {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        a: u32,
        #[arg(long)]
        b: u32,
    },
    /// Kind and mass enclosure of the level-k cell of a residue.
    Cell {
        #[command(flatten)]
        local: LocalArg,
        /// Residue entries x11,x12,x21,x22.
        #[arg(long, allow_hyphen_values = true)]
        residue: String,
    },
    /// Exact draws from the level-k pushforward.
    Sample {
        #[command(flatten)]
        local: LocalArg,
        #[arg(long, default_value_t = 10)]
        n: usize,
    },
    /// Mass of the invertible locus over a finite prime set.
    Yf {
        #[arg(long)]
        beta: f64,
        #[command(flatten)]
        primes: PrimeArg,
    },
    /// Grid of mass_YF over β and prime cutoffs.
    Scan {
        #[arg(long, value_delimiter = ',', required = true)]
        beta: Vec<f64>,
        #[arg(long, value_delimiter = ',', required = true)]
        cutoffs: Vec<u64>,
    },
    /// Haar cell mass at β = 1, or its scaling under g.
    Beta1 {
        #[arg(long)]
        n: u64,
        /// Cell u,v.
        #[arg(long, default_value = "0,0", allow_hyphen_values = true)]
        cell: String,
        /// Matrix a,b,c,d with positive determinant.
        #[arg(long, allow_hyphen_values = true)]
        g: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
pub enum SingularCmd {
    /// Exact check of the Hecke recursion on the singular strata.
    Verify {
        #[arg(long)]
        p: u64,
    },
    /// Roots of (p+1)x = 1 + p x².
    Roots {
        #[arg(long)]
        p: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ProjectInput {
    /// Random Γ-invariant function from the seed.
    Random,
    /// Indicator of the invertible cells.
    Gl,
    /// The constant 1.
    Constant,
}

#[derive(Subcommand, Debug)]
pub enum ProjectCmd {
    /// Truncated projection against the dense orthogonal projection.
    Check {
        #[arg(long, default_value_t = 2)]
        p: u64,
        #[arg(long, default_value_t = 3.0)]
        beta: f64,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long, default_value_t = 1 << 16)]
        det_bound: u64,
        #[arg(long, value_enum, default_value_t = ProjectInput::Random)]
        function: ProjectInput,
        #[arg(long, default_value_t = 1e-4)]
        tolerance: f64,
    },
}

#[derive(Args, Debug)]
pub struct DampingArgs {
    /// trivial:M, mod4 or legendre:Q.
    #[arg(long, default_value = "mod4")]
    chi: String,
    #[arg(long)]
    beta: f64,
    #[command(flatten)]
    primes: PrimeArg,
}

fn parse_character(s: &str) -> CliResult<DirichletCharacter> {
    let num = |x: &str| -> CliResult<u64> {
        x.parse().map_err(|_| CliError::Usage(format!("bad modulus in {s:?}")))
    };
    Ok(match s.split_once(':') {
        None if s == "mod4" => DirichletCharacter::mod4(),
        Some(("trivial", m)) => DirichletCharacter::trivial(num(m)?)?,
        Some(("legendre", q)) => DirichletCharacter::legendre(num(q)?)?,
        _ => return usage(format!("character must be trivial:M, mod4 or legendre:Q, got {s:?}")),
    })
}

#[derive(Subcommand, Debug)]
pub enum EquidistCmd {
    /// Hecke points reduced to the fundamental domain.
    Points {
        #[command(flatten)]
        coset: CosetArg,
        #[command(flatten)]
        tau: TauArg,
    },
    /// Sup over the test set of |empirical mean − target integral|.
    Discrepancy {
        #[command(flatten)]
        coset: CosetArg,
        #[command(flatten)]
        tau: TauArg,
        #[arg(long, value_enum, default_value_t = TestSet::Boxes)]
        tests: TestSet,
    },
    /// Discrepancy for a list of cosets, ordered by R_Γ.
    Trend {
        /// Cosets as r:n, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        cosets: Vec<String>,
        #[command(flatten)]
        tau: TauArg,
        #[arg(long, value_enum, default_value_t = TestSet::Boxes)]
        tests: TestSet,
    },
}

type Dispatched = (Output, CliResult<()>);

fn ok(o: Output) -> CliResult<Dispatched> {
    Ok((o, Ok(())))
}

fn verdict(o: Output, pass: bool, what: &str) -> CliResult<Dispatched> {
    let v = if pass {
        Ok(())
    } else {
        Err(CliError::Internal(format!("{what} failed")))
    };
    Ok((o, v))
}

pub fn dispatch(cmd: &crate::Command, ctx: &Ctx) -> CliResult<Dispatched> {
    use crate::Command::*;
    match cmd {
        Cosets(c) => cosets(c),
        Hecke(c) => hecke(c),
        Zeta(c) => zeta(c),
        Measure(c) => measure(c, ctx),
        Singular(c) => singular(c, ctx),
        Project(c) => project(c, ctx),
        Damping(a) => damping(a),
        Equidist(c) => equidist(c),
    }
}

fn cosets(cmd: &CosetsCmd) -> CliResult<Dispatched> {
    match cmd {
        CosetsCmd::Nf { matrix } => {
            let m = Mat2Q::parse(matrix)?;
            let nf = double_coset_nf(&m)?;
            ok(Output::Json(json!({
                "coset": nf.coset.to_json_value(),
                "left": nf.left,
                "right": nf.right,
                "r_gamma": r_gamma(&nf.coset),
            })))
        }
        CosetsCmd::Reps(c) => {
            let list = right_coset_reps(&c.resolve()?);
            let mut csv = String::from("a,b,c,d\n");
            for m in &list.reps {
                let e = m.entries().map(rat_to_string);
                csv.push_str(&format!("{},{},{},{}\n", e[0], e[1], e[2], e[3]));
            }
            ok(Output::Table {
                json: json!({"coset": list.coset.to_json_value(), "reps": list.reps}),
                csv,
            })
        }
        CosetsCmd::Index(c) => ok(Output::Scalar(r_gamma(&c.resolve()?).to_string())),
    }
}

fn hecke(cmd: &HeckeCmd) -> CliResult<Dispatched> {
    match cmd {
        HeckeCmd::Mul { lhs, rhs } => {
            let p = hecke_mul(&parse_element(lhs)?, &parse_element(rhs)?);
            ok(Output::Json(p.to_json_value()))
        }
        HeckeCmd::Star { element } => ok(Output::Json(hecke_star(&parse_element(element)?).to_json_value())),
        HeckeCmd::Repcheck { lhs, rhs, modulus } => {
            let (f1, f2) = (parse_element(lhs)?, parse_element(rhs)?);
            for f in [&f1, &f2] {
                hecke_to_operator(f, *modulus)?;
            }
            let holds = representation_holds(&f1, &f2, *modulus)?;
            verdict(
                Output::Json(json!({"N": modulus, "holds": holds})),
                holds,
                "representation check",
            )
        }
    }
}

fn zeta(cmd: &ZetaCmd) -> CliResult<Dispatched> {
    let scalar = |x: f64| ok(Output::Scalar(num(x)));
    match cmd {
        ZetaCmd::Local { p, beta } => scalar(zeta_local(*p, *beta)?),
        ZetaCmd::Finite { primes, beta } => scalar(zeta_finite_set(&primes.resolve()?, *beta)?),
        ZetaCmd::Global { beta } => scalar(zeta_global(*beta)?),
        ZetaCmd::Brute {
            semigroup,
            beta,
            det_bound,
        } => {
            let spec = parse_semigroup(semigroup)?;
            let mut betas = beta.clone();
            betas.sort_by(f64::total_cmp);
            let mut rows = Vec::new();
            let mut csv = String::from("beta,closed_form,bruteforce,det_bound,abs_error\n");
            for b in betas {
                let cf = closed_form(&spec, b)?;
                let bf = zeta_bruteforce(&spec, b, *det_bound)?;
                let err = (cf - bf).abs();
                csv.push_str(&format!("{},{},{},{},{}\n", num(b), num(cf), num(bf), det_bound, num(err)));
                rows.push(json!({
                    "beta": jnum(b), "closed_form": jnum(cf), "bruteforce": jnum(bf),
                    "det_bound": det_bound, "abs_error": jnum(err),
                }));
            }
            ok(Output::Table {
                json: rows.into(),
                csv,
            })
        }
    }
}

fn kind_json(k: CellKind) -> Value {
    match k {
        CellKind::Zero => json!({"type": "zero"}),
        CellKind::Regular { a, b } => json!({"type": "regular", "a": a, "b": b}),
        CellKind::RankDeficient { c } => json!({"type": "rank_deficient", "c": c}),
    }
}

fn measure(cmd: &MeasureCmd, ctx: &Ctx) -> CliResult<Dispatched> {
    match cmd {
        MeasureCmd::Stratum { p, beta, a, b } => {
            let spec = LocalMeasureSpec::new(*p, *beta, 1)?;
            ok(Output::Scalar(num(stratum_mass(&spec, *a, *b)?)))
        }
        MeasureCmd::Cell { local, residue } => {
            let spec = local.spec()?;
            let x = parse_ints::<4>(residue, "--residue")?;
            let kind = cell_kind(x, spec.p(), spec.k())?;
            let m = cell_mass(&spec, x)?;
            let q = spec.modulus() as i64;
            ok(Output::Json(json!({
                "p": spec.p(), "beta": jnum(spec.beta()), "k": spec.k(),
                "residue": x.map(|e| e.rem_euclid(q)),
                "kind": kind_json(kind),
                "mass_lo": jnum(m.lo), "mass_hi": jnum(m.hi),
            })))
        }
        MeasureCmd::Sample { local, n } => {
            let spec = local.spec()?;
            let mut s = LocalSampler::new(spec, ctx.seed);
            let mut csv = String::from("a,b,x11,x12,x21,x22\n");
            let mut rows = Vec::with_capacity(*n);
            for _ in 0..*n {
                let d = s.next_draw();
                let r = d.residue;
                csv.push_str(&format!("{},{},{},{},{},{}\n", d.a, d.b, r[0], r[1], r[2], r[3]));
                rows.push(serde_json::to_value(d).expect("serializable"));
            }
            ok(Output::Table {
                json: json!({
                    "p": spec.p(), "beta": jnum(spec.beta()), "k": spec.k(),
                    "seed": ctx.seed, "draws": rows,
                }),
                csv,
            })
        }
        MeasureCmd::Yf { beta, primes } => ok(Output::Scalar(num(mass_yf(*beta, &primes.resolve()?)?))),
        MeasureCmd::Scan { beta, cutoffs } => {
            let rows = phase_scan(beta, cutoffs)?;
            ok(Output::Table {
                json: rows
                    .iter()
                    .map(|r| json!({"beta": jnum(r.beta), "prime_cutoff": r.prime_cutoff, "mass_yf": jnum(r.mass_yf)}))
                    .collect::<Vec<_>>()
                    .into(),
                csv: phase_csv(&rows),
            })
        }
        MeasureCmd::Beta1 { n, cell, g } => {
            let [u, v] = parse_ints::<2>(cell, "--cell")?;
            let x = match g {
                None => beta1_haar_cell(*n, (u, v))?,
                Some(g) => beta1_scaling_factor(parse_ints::<4>(g, "--g")?, *n, (u, v))?,
            };
            ok(Output::Scalar(num(x)))
        }
    }
}

fn singular(cmd: &SingularCmd, ctx: &Ctx) -> CliResult<Dispatched> {
    match cmd {
        SingularCmd::Verify { p } => {
            let r = verify_singular_hecke(*p)?;
            let pass = r.all_pass();
            verdict(Output::Json(r.to_json_value()), pass, "singular strata check")
        }
        SingularCmd::Roots { p } => {
            let q = singular_quadratic_roots(*p)?;
            let roots: Vec<Value> = q.roots.iter().map(|x| rat_out(x, ctx.exact)).collect();
            ok(Output::Json(json!({"p": p, "roots": roots, "betas": q.betas})))
        }
    }
}

fn project(cmd: &ProjectCmd, ctx: &Ctx) -> CliResult<Dispatched> {
    let ProjectCmd::Check {
        p,
        beta,
        k,
        det_bound,
        function,
        tolerance,
    } = cmd;
    let spec = LocalMeasureSpec::new(*p, *beta, *k)?;
    let q = spec.modulus();
    let f = match function {
        ProjectInput::Random => {
            let t = orbit_table(q)?;
            let mut rng = SplitMix64::new(ctx.seed);
            let vals: Vec<f64> = (0..t.orbit_count()).map(|_| rng.next_f64()).collect();
            FiniteLevelFn::from_orbit_values(q, &vals)?
        }
        ProjectInput::Gl => FiniteLevelFn::from_fn(q, |x| {
            (cell_kind(x, *p, *k).expect("validated prime") == CellKind::Regular { a: 0, b: 0 }) as u8 as f64
        })?,
        ProjectInput::Constant => FiniteLevelFn::constant(q, 1.0)?,
    };
    let truncated = project_invariants(&spec, &f, *det_bound)?;
    let dense = dense_projection(&spec, &f)?;
    let twice = project_invariants(&spec, &truncated, *det_bound)?;
    let gap = |a: &FiniteLevelFn<f64>, b: &FiniteLevelFn<f64>| {
        a.values()
            .iter()
            .zip(b.values())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    };
    let max_gap = gap(&truncated, &dense);
    let idem = gap(&truncated, &twice);
    let defect = invariance_defect(&truncated, *p);
    let units: Vec<Value> = projection_on_units(&spec, &f, *det_bound)?
        .into_iter()
        .map(|(v, x)| json!({"unit": v, "value": jnum(x)}))
        .collect();
    let pass = max_gap <= *tolerance && idem <= *tolerance && defect <= *tolerance;
    verdict(
        Output::Json(json!({
            "p": p, "beta": jnum(*beta), "k": k, "det_bound": det_bound,
            "function": format!("{function:?}").to_lowercase(),
            "value": jnum(truncated.values()[0]),
            "dense_value": jnum(dense.values()[0]),
            "on_units": units,
            "max_abs_gap": jnum(max_gap),
            "idempotence_gap": jnum(idem),
            "invariance_defect": jnum(defect),
            "tolerance": jnum(*tolerance),
            "pass": pass,
        })),
        pass,
        "projection check",
    )
}

fn damping(a: &DampingArgs) -> CliResult<Dispatched> {
    let chi = parse_character(&a.chi)?;
    let primes: Vec<u64> = match a.primes.prime_cutoff {
        Some(_) if a.primes.primes.is_empty() => a
            .primes
            .resolve()?
            .into_iter()
            .filter(|&p| gcd_u64(p, chi.modulus()) == 1)
            .collect(),
        _ => a.primes.resolve()?,
    };
    let v = character_damping(&chi, a.beta, &primes)?;
    ok(Output::Json(json!({
        "modulus": chi.modulus(), "beta": jnum(a.beta), "prime_count": primes.len(),
        "re": jnum(v.re), "im": jnum(v.im), "abs": jnum(v.norm()),
    })))
}

fn equidist(cmd: &EquidistCmd) -> CliResult<Dispatched> {
    match cmd {
        EquidistCmd::Points { coset, tau } => {
            let pts = hecke_points(&coset.resolve()?, tau.point()?)?;
            ok(Output::Table {
                json: pts.iter().map(|p| json!({"x": jnum(p.x), "y": jnum(p.y)})).collect::<Vec<_>>().into(),
                csv: hecke_core::action::plane::points_csv(&pts),
            })
        }
        EquidistCmd::Discrepancy { coset, tau, tests } => {
            let d = equidist_discrepancy(&coset.resolve()?, tau.point()?, &tests.functions())?;
            ok(Output::Scalar(num(d)))
        }
        EquidistCmd::Trend { cosets, tau, tests } => {
            let cs = cosets
                .iter()
                .map(|s| DoubleCosetNF::parse_short(s))
                .collect::<Result<Vec<_>, _>>()?;
            let rows = equidist_trend(tau.point()?, &cs, &tests.functions())?;
            ok(Output::Table {
                json: rows
                    .iter()
                    .map(|r| {
                        json!({
                            "coset": r.coset.to_json_value(),
                            "r_gamma": r.r_gamma,
                            "discrepancy": jnum(r.discrepancy),
                        })
                    })
                    .collect::<Vec<_>>()
                    .into(),
                csv: trend_csv(&rows),
            })
        }
    }
}
