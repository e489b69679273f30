use std::collections::HashMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use heun_core::arith::parse::{parse_field, parse_poly, parse_rational_function, parse_scalar};
use heun_core::arith::{FieldSpec, Poly, RationalFunction, Scalar};
use heun_core::belyi::{classify_family, BelyiMap, Constraint, Constraints, Fiber, RamificationData};
use heun_core::heun::{accessory_from_solution, heun_to_lame, ode_to_heun, HeunEquation, HeunForm};
use heun_core::ode2::{LinearOde2, Mobius, Point};
use heun_core::pipeline::{pipeline_orbit, pipeline_to_heun, theorem1_operator, theorem1_scheme, HypergeometricParams};
use heun_core::tables::{parse_ramification, verify_table, Fixtures, RowReport, Samples, TableId};
use heun_core::Error;

#[derive(Parser)]
#[command(name = "heun", version, about = "Heun equations as pullbacks of Gauss hypergeometric equations")]
struct Cli {
    /// Quadratic extension for every scalar, e.g. "t1^2 + 3*t1 + 3 = 0"
    #[arg(long, global = true)]
    field: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct MapArgs {
    /// Numerator of j before the leading constant
    #[arg(long)]
    j1: String,
    /// Denominator of j
    #[arg(long)]
    j2: String,
    /// Constant c in j = c·j1/j2
    #[arg(long, allow_hyphen_values = true, default_value = "1")]
    lead: String,
}

#[derive(Args)]
struct GaussArgs {
    #[arg(long, allow_hyphen_values = true)]
    alpha: String,
    #[arg(long, allow_hyphen_values = true)]
    beta: String,
    #[arg(long, allow_hyphen_values = true)]
    gamma: String,
}

#[derive(Args)]
struct HeunArgs {
    /// θ₁, θ₂, θ₃, θ₄ separated by commas
    #[arg(long, allow_hyphen_values = true)]
    theta: String,
    #[arg(long, allow_hyphen_values = true)]
    t: String,
    #[arg(long, allow_hyphen_values = true, default_value = "0")]
    q: String,
}

#[derive(Args)]
struct OdeArgs {
    /// Coefficient of y'
    #[arg(long, allow_hyphen_values = true)]
    p1: String,
    /// Coefficient of y
    #[arg(long, allow_hyphen_values = true)]
    p2: String,
}

#[derive(Subcommand)]
enum Command {
    /// Check the Belyi property of j = c·j1/j2
    BelyiVerify(MapArgs),
    /// Ramification factors of j over 0, 1 and ∞
    Ramify(MapArgs),
    /// Pull the Gauss equation back along j
    Pullback {
        #[command(flatten)]
        map: MapArgs,
        #[command(flatten)]
        gauss: GaussArgs,
        /// Constraints A,B,C over 0, 1, ∞; read off the exponent differences when omitted
        #[arg(long)]
        constraints: Option<String>,
        /// Print the canonical Heun form
        #[arg(long)]
        normalize: bool,
        /// Print every Heun form (all arrangements and exponent gauges)
        #[arg(long, conflicts_with = "normalize")]
        orbit: bool,
    },
    /// Canonical Heun form of y'' + p1·y' + p2·y
    HeunNormalize(OdeArgs),
    /// SL form y'' = p·y of a Heun equation or of a general operator
    SlForm {
        /// θ₁, θ₂, θ₃, θ₄ separated by commas
        #[arg(long, allow_hyphen_values = true, requires = "t", conflicts_with_all = ["p1", "p2"])]
        theta: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        t: Option<String>,
        #[arg(long, allow_hyphen_values = true, default_value = "0")]
        q: String,
        /// Coefficient of y' of a general operator
        #[arg(long, allow_hyphen_values = true, requires = "p2")]
        p1: Option<String>,
        #[arg(long, allow_hyphen_values = true, requires = "p1")]
        p2: Option<String>,
    },
    /// Lamé form of a Heun equation with θ₁ = θ₂ = θ₃ = 1/2
    Lame(HeunArgs),
    /// Accessory parameter q from the leading terms of the exponent-0 solution at 0
    Accessory {
        #[arg(long, allow_hyphen_values = true)]
        theta: String,
        #[arg(long, allow_hyphen_values = true)]
        t: String,
        /// c₀, c₁, c₂, … separated by commas
        #[arg(long, allow_hyphen_values = true)]
        series: String,
    },
    /// Check the bundled table fixtures
    TablesVerify {
        /// 1, 1b, 2, example1 or all
        #[arg(long, default_value = "all")]
        table: String,
        /// Directory holding table1.toml, table1b.toml, table2.toml and example1.toml
        #[arg(long)]
        fixtures: Option<PathBuf>,
    },
    /// Constraints leaving four singular points, from j or from cycle data
    Classify {
        #[arg(long, requires = "j2")]
        j1: Option<String>,
        #[arg(long)]
        j2: Option<String>,
        #[arg(long, allow_hyphen_values = true, default_value = "1")]
        lead: String,
        /// Cycle data such as "(3)(1), (2)(2), (3)(1)"
        #[arg(long, conflicts_with = "j1")]
        ram: Option<String>,
    },
}

/// Bad input (exit 2) or a failed verification (exit 1).
enum Failure {
    Input(String),
    Mismatch(Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. }
            | Error::Unbound(_)
            | Error::FieldMismatch(_)
            | Error::ReducibleField(_)
            | Error::Fixture(_)
            | Error::Unsplit(_)
            | Error::ExponentOutsideField(_) => Failure::Input(e.to_string()),
            other => Failure::Mismatch(json!({ "error": other.to_string() })),
        }
    }
}

type Outcome = Result<Value, Failure>;

struct Ctx {
    field: FieldSpec,
}

impl Ctx {
    fn scalar(&self, text: &str) -> Result<Scalar, Failure> {
        Ok(parse_scalar(text, &self.field, &HashMap::new())?)
    }

    fn scalars(&self, text: &str) -> Result<Vec<Scalar>, Failure> {
        text.split(',').map(|s| self.scalar(s)).collect()
    }

    fn rf(&self, text: &str) -> Result<RationalFunction, Failure> {
        Ok(parse_rational_function(text, &self.field, &HashMap::new())?)
    }

    fn poly(&self, text: &str) -> Result<Poly, Failure> {
        Ok(parse_poly(text, &self.field)?)
    }

    fn map(&self, args: &MapArgs) -> Result<BelyiMap, Failure> {
        Ok(BelyiMap::verify(&self.poly(&args.j1)?, &self.poly(&args.j2)?, &self.scalar(&args.lead)?)?)
    }

    fn heun(&self, args: &HeunArgs) -> Result<HeunEquation, Failure> {
        Ok(HeunEquation::new(self.theta(&args.theta)?, self.scalar(&args.t)?, self.scalar(&args.q)?)?)
    }

    fn theta(&self, text: &str) -> Result<[Scalar; 4], Failure> {
        self.scalars(text)?
            .try_into()
            .map_err(|v: Vec<Scalar>| Failure::Input(format!("--theta needs four values, got {}", v.len())))
    }
}

fn scalar_json(x: &Scalar) -> Value {
    match (x.as_rational(), x.field()) {
        (Some(r), _) => Value::String(r.to_string()),
        (None, Some(k)) => {
            let (a, b) = x.coords();
            json!({ "a": a.to_string(), "b": b.to_string(), "minpoly": k.minpoly_string() })
        }
        (None, None) => Value::String(x.to_string()),
    }
}

fn point_json(p: &Point) -> Value {
    match p {
        Point::Finite(x) => scalar_json(x),
        Point::RootsOf(f) => json!({ "roots_of": f.to_string() }),
        Point::Infinity => Value::String("inf".into()),
    }
}

fn heun_json(h: &HeunEquation) -> Value {
    json!({
        "t": scalar_json(&h.t),
        "q": scalar_json(&h.q),
        "theta": h.theta.iter().map(scalar_json).collect::<Vec<_>>(),
        "theta41": scalar_json(&h.theta41()),
        "theta42": scalar_json(&h.theta42()),
    })
}

fn mobius_json(m: &Mobius) -> Value {
    json!([scalar_json(&m.a), scalar_json(&m.b), scalar_json(&m.c), scalar_json(&m.d)])
}

fn form_json(f: &HeunForm) -> Value {
    json!({
        "heun": heun_json(&f.heun),
        "mobius": mobius_json(&f.mobius),
        "gauge_dlog": f.gauge.dlog.to_string(),
    })
}

fn ode_json(ode: &LinearOde2) -> Value {
    json!({ "p1": ode.p1().to_string(), "p2": ode.p2().to_string() })
}

fn ram_json(r: &RamificationData) -> Value {
    json!(r.as_lists().map(|mut v| {
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    }))
}

fn constraints_json(c: &Constraints) -> Value {
    json!(c.map(|k| k.to_string()))
}

fn parse_constraints(text: &str) -> Result<Constraints, Failure> {
    let parts = text.split(',').map(str::parse::<Constraint>).collect::<Result<Vec<_>, _>>()?;
    parts.try_into().map_err(|_| Failure::Input(format!("--constraints needs three entries, got `{text}`")))
}

fn belyi_verify(ctx: &Ctx, args: &MapArgs) -> Outcome {
    let j1 = ctx.poly(&args.j1)?;
    let j2 = ctx.poly(&args.j2)?;
    let lead = ctx.scalar(&args.lead)?;
    match BelyiMap::verify(&j1, &j2, &lead) {
        Ok(m) => Ok(json!({
            "belyi": true,
            "N": m.n(),
            "ram": ram_json(&m.ramification()),
            "lambda_deg": m.lambda().deg(),
        })),
        Err(e @ (Error::NotBelyi { .. } | Error::NotCoprime | Error::DegreeCondition { .. } | Error::ConstantMap)) => {
            Err(Failure::Mismatch(json!({ "belyi": false, "reason": e.to_string() })))
        }
        Err(e) => Err(e.into()),
    }
}

fn ramify(ctx: &Ctx, args: &MapArgs) -> Outcome {
    let m = ctx.map(args)?;
    let fiber = |f: Fiber| -> Vec<Value> {
        m.fiber_factors(f).iter().map(|(e, p)| json!({ "index": e, "factor": p.to_string() })).collect()
    };
    let r = m.ramification();
    Ok(json!({
        "N": m.n(),
        "M": m.m(),
        "over0": fiber(Fiber::Zero),
        "over1": fiber(Fiber::One),
        "over_inf": fiber(Fiber::Infinity),
        "infinity_index": m.n() - m.m(),
        "ram": ram_json(&r),
        "riemann_hurwitz": r.riemann_hurwitz_holds(),
        "lambda": m.lambda().to_string(),
    }))
}

fn pullback(
    ctx: &Ctx,
    map: &MapArgs,
    gauss: &GaussArgs,
    constraints: Option<&str>,
    normalize: bool,
    orbit: bool,
) -> Outcome {
    let m = ctx.map(map)?;
    let p = HypergeometricParams::new(ctx.scalar(&gauss.alpha)?, ctx.scalar(&gauss.beta)?, ctx.scalar(&gauss.gamma)?);
    let c = match constraints {
        Some(text) => parse_constraints(text)?,
        None => p.implied_constraints(),
    };
    if normalize {
        let form = pipeline_to_heun(&m, &p, &c, &ctx.field)?;
        return Ok(json!({ "constraints": constraints_json(&c), "form": form_json(&form) }));
    }
    if orbit {
        let forms = pipeline_orbit(&m, &p, &c, &ctx.field)?;
        return Ok(
            json!({ "constraints": constraints_json(&c), "forms": forms.iter().map(form_json).collect::<Vec<_>>() }),
        );
    }
    let op = theorem1_operator(&m, &p)?;
    let scheme: Vec<Value> = theorem1_scheme(&m, &p, &ctx.field)
        .rows
        .iter()
        .map(|r| json!({ "point": point_json(&r.point), "exponents": r.exponents.iter().map(scalar_json).collect::<Vec<_>>() }))
        .collect();
    Ok(json!({ "operator": ode_json(&op), "scheme": scheme }))
}

fn heun_normalize(ctx: &Ctx, args: &OdeArgs) -> Outcome {
    let ode = LinearOde2::new(ctx.rf(&args.p1)?, ctx.rf(&args.p2)?);
    Ok(form_json(&ode_to_heun(&ode, &ctx.field)?))
}

fn sl_form(ctx: &Ctx, heun: Option<HeunArgs>, ode: Option<OdeArgs>) -> Outcome {
    match (heun, ode) {
        (Some(args), None) => {
            let sl = ctx.heun(&args)?.to_sl();
            Ok(json!({
                "a1": scalar_json(&sl.a1),
                "a2": scalar_json(&sl.a2),
                "a3": scalar_json(&sl.a3),
                "a4": scalar_json(&sl.a4),
                "L": scalar_json(&sl.l),
                "t": scalar_json(&sl.t),
                "potential": sl.potential().to_string(),
            }))
        }
        (None, Some(args)) => {
            let ode = LinearOde2::new(ctx.rf(&args.p1)?, ctx.rf(&args.p2)?);
            Ok(json!({ "potential": ode.sl_potential().to_string() }))
        }
        _ => Err(Failure::Input("give either --theta/--t/--q or --p1/--p2".into())),
    }
}

fn lame(ctx: &Ctx, args: &HeunArgs) -> Outcome {
    let l = heun_to_lame(&ctx.heun(args)?)?;
    Ok(json!({
        "n": scalar_json(&l.n),
        "B": scalar_json(&l.b),
        "g2": scalar_json(&l.g2),
        "g3": scalar_json(&l.g3),
        "cubic": l.cubic().to_string(),
    }))
}

fn accessory(ctx: &Ctx, theta: &str, t: &str, series: &str) -> Outcome {
    let q = accessory_from_solution(&ctx.theta(theta)?, &ctx.scalar(t)?, &ctx.scalars(series)?)?;
    Ok(json!({ "q": scalar_json(&q) }))
}

fn tables_verify(table: &str, dir: Option<&PathBuf>) -> Outcome {
    let fixtures = match dir {
        Some(d) => Fixtures::load(d)?,
        None => Fixtures::bundled()?,
    };
    let samples = Samples::from_env()?;
    let tables = match table {
        "all" => vec![TableId::Example1, TableId::One, TableId::OneB, TableId::Two],
        one => vec![one.parse::<TableId>()?],
    };
    let reports: Vec<RowReport> = tables.into_iter().flat_map(|t| verify_table(t, &fixtures, &samples)).collect();
    let rows: Vec<Value> = reports
        .iter()
        .map(|r| {
            json!({
                "table": r.table,
                "row": r.row,
                "pass": r.passed(),
                "quarantine": r.quarantine,
                "failed": r.checks.iter().filter(|c| !c.passed).map(|c| json!({ "check": c.name, "detail": c.detail })).collect::<Vec<_>>(),
            })
        })
        .collect();
    let failures = reports.iter().filter(|r| r.is_failure()).count();
    let summary = json!({
        "rows": reports.len(),
        "passed": reports.iter().filter(|r| r.passed()).count(),
        "quarantined": reports.iter().filter(|r| r.quarantine.is_some()).count(),
        "failed": failures,
        "report": rows,
    });
    if failures == 0 {
        Ok(summary)
    } else {
        Err(Failure::Mismatch(summary))
    }
}

fn classify(ctx: &Ctx, j1: Option<&str>, j2: Option<&str>, lead: &str, ram: Option<&str>) -> Outcome {
    let (r, n) = match (j1, j2, ram) {
        (Some(j1), Some(j2), None) => {
            let m = ctx.map(&MapArgs { j1: j1.into(), j2: j2.into(), lead: lead.into() })?;
            (m.ramification(), Some(m.n()))
        }
        (None, None, Some(text)) => {
            let [a, b, c] = parse_ramification(text)?;
            let r = RamificationData::from_multisets(a, b, c);
            let n = r.degree();
            (r, n)
        }
        _ => return Err(Failure::Input("give --j1 and --j2, or --ram".into())),
    };
    let c = classify_family(&r)?;
    Ok(json!({
        "constraints": constraints_json(&c.constraints),
        "witnesses": c.witnesses.iter().map(constraints_json).collect::<Vec<_>>(),
        "free_params": c.free_params,
        "rst": [c.r, c.s, c.t],
        "r1s1t1": [c.r1, c.s1, c.t1],
        "degree_bound": n.map(|n| c.degree_bound_holds(n)),
    }))
}

fn run(cli: &Cli) -> Outcome {
    let field = match &cli.field {
        Some(text) => FieldSpec::Quadratic(parse_field(text)?),
        None => FieldSpec::Rationals,
    };
    let ctx = Ctx { field };
    match &cli.command {
        Command::BelyiVerify(args) => belyi_verify(&ctx, args),
        Command::Ramify(args) => ramify(&ctx, args),
        Command::Pullback { map, gauss, constraints, normalize, orbit } => {
            pullback(&ctx, map, gauss, constraints.as_deref(), *normalize, *orbit)
        }
        Command::HeunNormalize(args) => heun_normalize(&ctx, args),
        Command::SlForm { theta, t, q, p1, p2 } => {
            let heun = theta.clone().zip(t.clone()).map(|(theta, t)| HeunArgs { theta, t, q: q.clone() });
            let ode = p1.clone().zip(p2.clone()).map(|(p1, p2)| OdeArgs { p1, p2 });
            sl_form(&ctx, heun, ode)
        }
        Command::Lame(args) => lame(&ctx, args),
        Command::Accessory { theta, t, series } => accessory(&ctx, theta, t, series),
        Command::TablesVerify { table, fixtures } => tables_verify(table, fixtures.as_ref()),
        Command::Classify { j1, j2, lead, ram } => classify(&ctx, j1.as_deref(), j2.as_deref(), lead, ram.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(value) => {
            println!("{value}");
            ExitCode::SUCCESS
        }
        Err(Failure::Mismatch(report)) => {
            println!("{report}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
