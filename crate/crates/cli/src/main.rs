use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use syzkit::gen::{gen_hermite_pade, gen_matrix_annihilator, gen_multivar_pade, gen_points_ideal, gen_random_commuting};
use syzkit::io::{basis_from_json, basis_to_json, instance_from_json, instance_to_json, mulmats_to_json};
use syzkit::oracle::{verify_instance, OracleLimits};
use syzkit::{change_order, multiplication_matrices, syzygy_basis, DenseMatrix, Error, MonomialOrder, PrimeField};

/// Commuting matrices above this dimension skip the commutation check unless
/// `--validate` is given.
const AUTO_VALIDATE_MAX_D: usize = 64;

#[derive(Parser)]
#[command(name = "syzkit", version, about = "Syzygy modules, multiplication matrices and change of order over GF(p)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reduced Gröbner basis of the relations of an instance.
    Syzygy {
        /// Monomial order, e.g. `top:lex` or `pot:degrevlex:vars=2,1`.
        #[arg(long, default_value = "top:lex")]
        order: MonomialOrder,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        validate: Validate,
    },
    /// Multiplication matrices of the quotient by a reduced Gröbner basis.
    Mulmats {
        #[arg(long, alias = "in")]
        gb: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recompute a reduced Gröbner basis for another order.
    ChangeOrder {
        /// Order of the input basis; overrides the one stored in the file.
        #[arg(long)]
        from: Option<MonomialOrder>,
        #[arg(long)]
        to: MonomialOrder,
        #[arg(long, alias = "in")]
        gb: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a ready-made instance.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
    /// Compare the engine against the brute-force oracle; prints PASS/FAIL per check.
    Verify {
        #[arg(long, default_value = "top:lex")]
        order: MonomialOrder,
        #[arg(long = "in")]
        input: PathBuf,
        /// Cap on the rows of the materialised Krylov matrix (default: SYZKIT_ORACLE_LIMIT or 1000000).
        #[arg(long)]
        limit_rows: Option<usize>,
    },
}

#[derive(Args)]
struct Validate {
    /// Check that the matrices commute (default: on when D <= 64).
    #[arg(long, conflicts_with = "no_validate")]
    validate: bool,
    #[arg(long)]
    no_validate: bool,
}

impl Validate {
    fn enabled(&self, d: usize) -> bool {
        self.validate || (!self.no_validate && d <= AUTO_VALIDATE_MAX_D)
    }
}

#[derive(Subcommand)]
enum GenKind {
    /// Vanishing ideal of points, e.g. `--points "(0,0);(1,0);(0,1)"`.
    Points {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        points: String,
    },
    /// Hermite-Padé approximation modulo x^D, e.g. `--polys "1,1;0,1"`.
    HermitePade {
        #[arg(long)]
        p: u64,
        #[arg(long = "D")]
        d: usize,
        /// Coefficient lists, constant term first, separated by `;`.
        #[arg(long)]
        polys: String,
    },
    /// Annihilator of commuting square matrices, each given as `--matrix "0,1;0,0"`.
    Annihilator {
        #[arg(long)]
        p: u64,
        #[arg(long = "matrix", required = true)]
        matrices: Vec<String>,
    },
    /// Multivariate Padé approximation modulo <X1^d, ..., Xn^d>.
    MultivarPade {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        /// Dense coefficient vector of one series, X1 varying fastest; repeat for f2, f3, ...
        #[arg(long = "f", required = true)]
        fs: Vec<String>,
    },
    /// Seeded random commuting family.
    Random {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: usize,
        #[arg(long = "D")]
        d: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Failure of one command together with its exit status.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: e.exit_code() as u8,
            message: e.to_string(),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure {
        code: 2,
        message: format!("cannot read {}: {e}", path.display()),
    })
}

fn write(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure {
            code: 2,
            message: format!("cannot write {}: {e}", path.display()),
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_ints(s: &str) -> Result<Vec<i64>, Error> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<i64>().map_err(|_| Error::InvalidInput(format!("`{t}` is not an integer"))))
        .collect()
}

fn parse_points(s: &str) -> Result<Vec<Vec<i64>>, Error> {
    s.split(';')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| parse_ints(t.trim_start_matches('(').trim_end_matches(')')))
        .collect()
}

fn parse_matrix(field: PrimeField, s: &str) -> Result<DenseMatrix, Error> {
    let rows = parse_points(s)?;
    DenseMatrix::from_rows(field, &rows)
}

fn run_gen(kind: GenKind) -> Result<String, Error> {
    let inst = match kind {
        GenKind::Points { p, points } => gen_points_ideal(PrimeField::new(p)?, &parse_points(&points)?)?,
        GenKind::HermitePade { p, d, polys } => {
            let polys = polys.split(';').map(parse_ints).collect::<Result<Vec<_>, _>>()?;
            gen_hermite_pade(PrimeField::new(p)?, d, &polys)?
        }
        GenKind::Annihilator { p, matrices } => {
            let field = PrimeField::new(p)?;
            let ns = matrices.iter().map(|s| parse_matrix(field, s)).collect::<Result<Vec<_>, _>>()?;
            gen_matrix_annihilator(&ns)?
        }
        GenKind::MultivarPade { p, n, d, fs } => {
            let fs = fs.iter().map(|s| parse_ints(s)).collect::<Result<Vec<_>, _>>()?;
            gen_multivar_pade(PrimeField::new(p)?, n, d, &fs)?
        }
        GenKind::Random { p, n, d, m, seed } => gen_random_commuting(PrimeField::new(p)?, n, d, m, seed)?,
    };
    Ok(instance_to_json(&inst))
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Syzygy {
            order,
            input,
            out,
            validate,
        } => {
            let inst = instance_from_json(&read(&input)?)?;
            if validate.enabled(inst.d) {
                inst.check_commuting()?;
            }
            let gb = syzygy_basis(&order, &inst)?;
            write(out.as_deref(), &basis_to_json(&gb))
        }
        Command::Mulmats { gb, out } => {
            let gb = basis_from_json(&read(&gb)?)?;
            let mm = multiplication_matrices(&gb)?;
            write(out.as_deref(), &mulmats_to_json(&gb, &mm))
        }
        Command::ChangeOrder { from, to, gb, out } => {
            let mut gb = basis_from_json(&read(&gb)?)?;
            if let Some(from) = from {
                gb.order = from.resolved(gb.n)?;
            }
            let new = change_order(&gb, &to)?;
            write(out.as_deref(), &basis_to_json(&new))
        }
        Command::Gen { kind, out } => write(out.as_deref(), &run_gen(kind)?),
        Command::Verify {
            order,
            input,
            limit_rows,
        } => {
            let inst = instance_from_json(&read(&input)?)?;
            inst.check_commuting()?;
            let mut limits = OracleLimits::from_env();
            if let Some(rows) = limit_rows {
                limits.rows = rows;
            }
            let outcomes = verify_instance(&order, &inst, &limits)?;
            let mut failed = 0;
            for c in &outcomes {
                if c.passed {
                    println!("PASS {}", c.name);
                } else {
                    failed += 1;
                    println!("FAIL {}: {}", c.name, c.detail);
                }
            }
            if failed > 0 {
                return Err(Failure {
                    code: 4,
                    message: format!("{failed} of {} checks failed", outcomes.len()),
                });
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
