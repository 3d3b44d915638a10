//! Command-line surface. `run` returns the exit status and the rendered
//! output so the binary stays a thin wrapper.

use std::path::Path;

use clap::{Args, Parser, Subcommand};

use crate::action::{action_density, boundary, ghost_sector, physical_part};
use crate::algebra::{Poly, Q};
use crate::cartan::in_ideal;
use crate::error::{Error, Result};
use crate::frontend::{builtin, load_model};
use crate::gauge_pde::{check_hamiltonian, check_model, solve_hamiltonian, Model};
use crate::reduction::{reduce, Point, PresymplecticMatrix};
use crate::report::{Format, Output, Report};
use crate::superjets::prolong;

#[derive(Parser, Debug)]
#[command(name = "gpde", version, about = "Verification kernel for presymplectic gauge PDEs")]
pub struct Cli {
    #[arg(long, global = true, default_value = "text")]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug)]
pub struct ModelArg {
    /// Path to a `.gpde` file or the name of a built-in model.
    pub model: String,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Projection, nilpotency and presymplectic compatibility.
    Check(ModelArg),
    /// Solve for the covariant Hamiltonian.
    Hamiltonian(ModelArg),
    /// Build the super-jet model and check (D + s)^2.
    Prolong {
        #[command(flatten)]
        m: ModelArg,
        #[arg(long, default_value_t = 2)]
        order: usize,
    },
    Descent {
        #[command(flatten)]
        m: ModelArg,
        #[arg(long, default_value_t = 2)]
        order: usize,
    },
    BvIdentities {
        #[command(flatten)]
        m: ModelArg,
        #[arg(long, default_value_t = 2)]
        order: usize,
    },
    /// BV action density of the full supersection.
    BvAction {
        #[command(flatten)]
        m: ModelArg,
        #[arg(long)]
        ghost: Option<i32>,
    },
    /// Kernel and quotient of the target-space 2-form.
    Reduce {
        #[command(flatten)]
        m: ModelArg,
        /// Evaluation point, e.g. `z=1,w=-1/2`.
        #[arg(long)]
        at: Option<String>,
    },
    /// Restrict to a hypersurface and reduce the induced structure.
    Boundary {
        #[command(flatten)]
        m: ModelArg,
        #[arg(long, value_delimiter = ',', required = true)]
        kill: Vec<u8>,
        #[arg(long, default_value_t = 1)]
        order: usize,
    },
    /// Every applicable check.
    Report {
        #[command(flatten)]
        m: ModelArg,
        #[arg(long, default_value_t = 2)]
        order: usize,
    },
}

pub fn resolve_model(arg: &str) -> Result<Model> {
    let p = Path::new(arg);
    if p.is_file() {
        let src = std::fs::read_to_string(p).map_err(|e| Error::Io(format!("{arg}: {e}")))?;
        load_model(arg, &src)
    } else {
        builtin(arg)
    }
}

fn parse_point(m: &Model, s: &str) -> Result<Point> {
    let mut pt = Point::new();
    for item in s.split(',').filter(|t| !t.trim().is_empty()) {
        let (k, v) = item.split_once('=').ok_or_else(|| Error::Parse(format!("bad point entry `{item}`")))?;
        let g = m.fibers.iter().find(|g| g.to_string() == k.trim()).ok_or_else(|| Error::Parse(format!("unknown coordinate `{}`", k.trim())))?;
        let q: Q = v.trim().parse().map_err(|_| Error::Parse(format!("bad rational `{}`", v.trim())))?;
        pt.insert(g.clone(), q);
    }
    Ok(pt)
}

fn hamiltonian_section(m: &Model, r: &mut Report) -> Result<()> {
    let l = solve_hamiltonian(m)?;
    r.extend(check_hamiltonian(m, &l)?);
    r.output("hamiltonian", Output::poly(&l));
    Ok(())
}

fn jets_section(m: &Model, order: usize, r: &mut Report, descent: bool, bv: bool) -> Result<()> {
    let jm = prolong(m, order)?;
    r.output("jets", Output::plain(format!("order {order}, {} jet coordinates", jm.coordinates().len())));
    if !descent && !bv {
        r.extend(jm.check_structure()?);
    }
    if descent {
        r.extend(jm.check_descent()?);
    }
    if bv {
        r.extend(jm.check_bv_identities()?);
        r.output("bv_lagrangian", Output::poly(&jm.bv_lagrangian()?));
    }
    Ok(())
}

fn survivors_text(red: &crate::reduction::ReducedModel) -> String {
    red.survivors.iter().map(|(g, l)| if Poly::gen(g) == *l { g.to_string() } else { format!("{g} := {l}") }).collect::<Vec<_>>().join(", ")
}

fn build(cmd: &Command) -> Result<Report> {
    let arg = match cmd {
        Command::Check(m) | Command::Hamiltonian(m) => m,
        Command::Prolong { m, .. }
        | Command::Descent { m, .. }
        | Command::BvIdentities { m, .. }
        | Command::BvAction { m, .. }
        | Command::Reduce { m, .. }
        | Command::Boundary { m, .. }
        | Command::Report { m, .. } => m,
    };
    let m = resolve_model(&arg.model)?;
    let mut r = Report::new(m.name.clone());
    match cmd {
        Command::Check(_) => r.extend(check_model(&m)?),
        Command::Hamiltonian(_) => hamiltonian_section(&m, &mut r)?,
        Command::Prolong { order, .. } => jets_section(&m, *order, &mut r, false, false)?,
        Command::Descent { order, .. } => jets_section(&m, *order, &mut r, true, false)?,
        Command::BvIdentities { order, .. } => jets_section(&m, *order, &mut r, false, true)?,
        Command::BvAction { ghost, .. } => {
            let s = action_density(&m, None)?;
            let s = ghost.map_or(s.clone(), |g| ghost_sector(&s, g));
            r.output("bv_action", Output::poly(&s));
            r.output("physical", Output::poly(&physical_part(&s)));
        }
        Command::Reduce { at, .. } => {
            let point = at.as_deref().map(|s| parse_point(&m, s)).transpose()?;
            let form = in_ideal(&m.omega()?).1;
            let pm = PresymplecticMatrix::from_form(&form, m.fibers.clone());
            let q = m.q.restrict(|g| !g.is_base());
            let red = reduce(&pm, point.as_ref(), Some(&q))?;
            r.extend(red.checks.clone());
            r.output("survivors", Output::plain(survivors_text(&red)));
            r.output("kernel_dim", Output::plain(red.kernel.len().to_string()));
            r.output("reduced", Output::poly(&red.form));
            if let Some(qp) = &red.projected {
                r.output("projected_q", Output::plain(qp.to_string()));
            }
        }
        Command::Boundary { kill, order, .. } => {
            let b = boundary(&m, kill, *order)?;
            r.extend(b.tangency.clone());
            r.extend(b.reduced.checks.clone());
            if let Some(chi) = &b.restricted.chi {
                r.output("chi_sigma", Output::poly(chi));
            }
            r.output("survivors", Output::plain(survivors_text(&b.reduced)));
            r.output("kernel_dim", Output::plain(b.reduced.kernel.len().to_string()));
            r.output("reduced", Output::poly(&b.reduced.form));
            r.output("charge", Output::poly(&b.charge));
        }
        Command::Report { order, .. } => {
            r.extend(check_model(&m)?);
            if m.chi.is_some() {
                hamiltonian_section(&m, &mut r)?;
                if m.dim() > 0 {
                    jets_section(&m, *order, &mut r, true, true)?;
                }
            }
        }
    }
    Ok(r)
}

/// Exit status 0 iff every non-informational check passed, 1 on failed
/// checks, 2 on errors.
pub fn run<I, T>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return (code, e.to_string());
        }
    };
    match build(&cli.command) {
        Ok(r) => (if r.pass() { 0 } else { 1 }, r.render(cli.format)),
        Err(e) => {
            let msg = match cli.format {
                Format::Json => serde_json::json!({ "error": e.to_string() }).to_string(),
                _ if matches!(e, Error::Parse(_)) => e.to_string(),
                _ => format!("error: {e}"),
            };
            (2, msg)
        }
    }
}
