//! Command line front end for the kernel.  Exit codes: 0 for a pass or
//! a true answer, 1 for a fail or a false answer, 2 for usage, parse,
//! or input errors.

mod format;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};

use ainfty::{
    bar_coalgebra, bianchi_residual, build_convolution, deformation_complex, element_curvature,
    is_mc, twist, AInftyStructure, DgAlgebra, Element, ExtendedAlgebra, Horn, McContext, McSimplex,
};

use format::{
    field_from_str, parse_algebra, parse_coalgebra, parse_dg_algebra, parse_element,
    parse_morphism, write_algebra, write_coalgebra, write_dg_algebra,
};

#[derive(Parser)]
#[command(
    name = "ainfty",
    version,
    about = "Exact computations with curved A-infinity algebras over Q or F_p"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the Stasheff relations of a structure file
    Validate {
        file: PathBuf,
    },
    /// Curvature of an element (of the zero element when omitted)
    Curvature {
        file: PathBuf,
        #[arg(long)]
        element: Option<String>,
    },
    /// Twist by a degree zero element and print the twisted structure
    Twist {
        file: PathBuf,
        #[arg(long)]
        element: String,
        /// Write the twisted structure here instead of stdout
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Decide whether an element is Maurer-Cartan
    McCheck {
        file: PathBuf,
        #[arg(long)]
        element: String,
    },
    /// List the Maurer-Cartan points (finite fields only)
    McEnumerate {
        file: PathBuf,
        /// Group the points into gauge components
        #[arg(long)]
        components: bool,
    },
    /// Decide whether an element over the n-simplex is a simplex of the
    /// Maurer-Cartan set
    McSimplexCheck {
        file: PathBuf,
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        element: String,
    },
    /// Fill a horn from its prescribed faces
    HornFill {
        file: PathBuf,
        /// Dimension of the filler simplex
        #[arg(long)]
        dim: usize,
        /// Index of the missing face
        #[arg(long)]
        missing: usize,
        /// A prescribed face, as "j: <element>", repeated
        #[arg(long = "face")]
        faces: Vec<String>,
    },
    /// Decide gauge equivalence of two Maurer-Cartan points
    GaugeCheck {
        file: PathBuf,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        /// Verify this 1-simplex as an explicit gauge witness instead
        #[arg(long)]
        witness: Option<String>,
    },
    /// Simplicial cochain tables
    Cochains {
        #[command(subcommand)]
        action: CochainsAction,
    },
    /// Convolution structures on hom spaces
    Convolution {
        #[command(subcommand)]
        action: ConvolutionAction,
    },
    /// Convolution structure of maps from the bar construction of one dg
    /// algebra into another, up to a weight cutoff
    DeformationComplex {
        #[arg(long)]
        source: PathBuf,
        #[arg(long)]
        target: PathBuf,
        #[arg(long)]
        weight: u32,
    },
    /// Verify that a morphism file intertwines two structures
    MorphismCheck {
        #[arg(long)]
        source: PathBuf,
        #[arg(long)]
        target: PathBuf,
        #[arg(long)]
        morphism: PathBuf,
    },
    /// Cross-check Maurer-Cartan in a deformation complex against
    /// transposition to a coalgebra map from the bar construction
    McAsTwisting {
        #[arg(long)]
        source: PathBuf,
        #[arg(long)]
        target: PathBuf,
        #[arg(long)]
        weight: u32,
        #[arg(long)]
        element: String,
    },
}

#[derive(Subcommand)]
enum CochainsAction {
    /// Print the normalized cochain algebra of the n-simplex
    Dump {
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value = "Q")]
        field: String,
    },
}

#[derive(Subcommand)]
enum ConvolutionAction {
    /// Build the convolution structure of a coalgebra and a dg algebra
    Build {
        #[arg(long)]
        coalgebra: PathBuf,
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        weight: u32,
    },
    /// Print the bar construction of a dg algebra as a coalgebra file
    Bar {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        weight: u32,
    },
}

fn read(path: &Path) -> Result<(String, String)> {
    let label = path.display().to_string();
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {label}"))?;
    Ok((label, text))
}

fn load_algebra(path: &Path) -> Result<AInftyStructure> {
    let (label, text) = read(path)?;
    Ok(parse_algebra(&label, &text)?)
}

fn load_dg_algebra(path: &Path) -> Result<DgAlgebra> {
    let (label, text) = read(path)?;
    Ok(parse_dg_algebra(&label, &text)?)
}

fn element_arg(a: &AInftyStructure, text: &str) -> Result<Element> {
    parse_element(a.space(), text).map_err(|m| anyhow!("bad element '{text}': {m}"))
}

/// "j: <element>" over the given extension level.
fn face_arg(level: &ExtendedAlgebra, text: &str) -> Result<(usize, Element)> {
    let (index, body) = text
        .split_once(':')
        .ok_or_else(|| anyhow!("bad face '{text}': expected \"j: <element>\""))?;
    let j: usize = index
        .trim()
        .parse()
        .map_err(|_| anyhow!("bad face index '{}'", index.trim()))?;
    let element = parse_element(level.space(), body.trim())
        .map_err(|m| anyhow!("bad face '{text}': {m}"))?;
    Ok((j, element))
}

/// True/false subcommands print their verdict and pick the exit code.
fn verdict(answer: bool, yes: &str, no: &str) -> u8 {
    if answer {
        println!("{yes}");
        0
    } else {
        println!("{no}");
        1
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Validate { file } => {
            let a = load_algebra(&file)?;
            let report = a.validate();
            println!("{report}");
            Ok(if report.is_pass() { 0 } else { 1 })
        }
        Command::Curvature { file, element } => {
            let a = load_algebra(&file)?;
            let x = match element {
                Some(text) => element_arg(&a, &text)?,
                None => Element::zero(a.space()),
            };
            println!("{}", element_curvature(&a, &x)?);
            Ok(0)
        }
        Command::Twist {
            file,
            element,
            output,
        } => {
            let a = load_algebra(&file)?;
            let x = element_arg(&a, &element)?;
            let result = twist(&a, &x)?;
            debug_assert!(bianchi_residual(&a, &x)?.is_zero());
            let text = write_algebra(&result.twisted);
            match output {
                Some(path) => std::fs::write(&path, text)
                    .with_context(|| format!("writing {}", path.display()))?,
                None => print!("{text}"),
            }
            Ok(0)
        }
        Command::McCheck { file, element } => {
            let a = load_algebra(&file)?;
            let x = element_arg(&a, &element)?;
            if is_mc(&a, &x)? {
                println!("maurer-cartan");
                Ok(0)
            } else {
                println!("not maurer-cartan: curvature {}", element_curvature(&a, &x)?);
                Ok(1)
            }
        }
        Command::McEnumerate { file, components } => {
            let a = load_algebra(&file)?;
            let context = McContext::new(&a, 1);
            if components {
                for (k, component) in context.path_components()?.iter().enumerate() {
                    let names: Vec<String> = component.iter().map(|p| p.to_string()).collect();
                    println!("component {k}: {}", names.join("; "));
                }
            } else {
                for point in context.mc_points()? {
                    println!("{point}");
                }
            }
            Ok(0)
        }
        Command::McSimplexCheck { file, dim, element } => {
            let a = load_algebra(&file)?;
            let context = McContext::new(&a, dim);
            let x = parse_element(context.level(dim).space(), &element)
                .map_err(|m| anyhow!("bad element '{element}': {m}"))?;
            Ok(verdict(
                context.is_mc_simplex(dim, &x)?,
                "simplex",
                "not a simplex",
            ))
        }
        Command::HornFill {
            file,
            dim,
            missing,
            faces,
        } => {
            let a = load_algebra(&file)?;
            if dim == 0 {
                bail!("horns live in dimension 1 and up");
            }
            let context = McContext::new(&a, dim);
            let level = context.level(dim - 1);
            let mut parsed: Vec<(usize, Element)> = faces
                .iter()
                .map(|text| face_arg(level, text))
                .collect::<Result<_>>()?;
            parsed.sort_by_key(|&(j, _)| j);
            let expected: Vec<usize> = (0..=dim).filter(|&j| j != missing).collect();
            let given: Vec<usize> = parsed.iter().map(|&(j, _)| j).collect();
            if given != expected {
                bail!("expected one face for each of {expected:?}, got {given:?}");
            }
            let simplices: Vec<McSimplex> = parsed
                .into_iter()
                .map(|(_, value)| Ok(context.simplex(dim - 1, value)?))
                .collect::<Result<_>>()?;
            let horn = Horn::new(&context, dim, missing, simplices)?;
            let filler = context.horn_fill(&horn)?;
            println!("{}", filler.value());
            Ok(0)
        }
        Command::GaugeCheck {
            file,
            left,
            right,
            witness,
        } => {
            let a = load_algebra(&file)?;
            let context = McContext::new(&a, 1);
            let x = element_arg(&a, &left)?;
            let y = element_arg(&a, &right)?;
            let answer = match witness {
                Some(text) => {
                    let path = parse_element(context.level(1).space(), &text)
                        .map_err(|m| anyhow!("bad witness '{text}': {m}"))?;
                    context.verify_gauge_witness(&x, &y, &path)?
                }
                None => context.are_gauge_equivalent(&x, &y)?,
            };
            Ok(verdict(answer, "gauge equivalent", "not gauge equivalent"))
        }
        Command::Cochains {
            action: CochainsAction::Dump { dim, field },
        } => {
            let field = field_from_str(&field).map_err(|m| anyhow!(m))?;
            print!(
                "{}",
                write_dg_algebra(&DgAlgebra::normalized_cochains(field, dim))
            );
            Ok(0)
        }
        Command::Convolution {
            action:
                ConvolutionAction::Build {
                    coalgebra,
                    algebra,
                    weight,
                },
        } => {
            let (clabel, ctext) = read(&coalgebra)?;
            let c = parse_coalgebra(&clabel, &ctext)?;
            let a = load_dg_algebra(&algebra)?;
            if c.field() != a.field() {
                bail!("the coalgebra and the algebra are over different fields");
            }
            let conv = build_convolution(&c, &a, weight)?;
            print!("{}", write_algebra(conv.structure()));
            Ok(0)
        }
        Command::Convolution {
            action: ConvolutionAction::Bar { algebra, weight },
        } => {
            let a = load_dg_algebra(&algebra)?;
            print!("{}", write_coalgebra(&bar_coalgebra(&a, weight)?));
            Ok(0)
        }
        Command::DeformationComplex {
            source,
            target,
            weight,
        } => {
            let a = load_dg_algebra(&source)?;
            let b = load_dg_algebra(&target)?;
            if a.field() != b.field() {
                bail!("the source and the target are over different fields");
            }
            let conv = deformation_complex(&a, &b, weight)?;
            print!("{}", write_algebra(conv.structure()));
            Ok(0)
        }
        Command::MorphismCheck {
            source,
            target,
            morphism,
        } => {
            let a = load_algebra(&source)?;
            let b = load_algebra(&target)?;
            if a.field() != b.field() {
                bail!("the source and the target are over different fields");
            }
            let (label, text) = read(&morphism)?;
            let f = parse_morphism(&label, &text, &a, &b)?;
            let report = f.morphism_check(f.intertwining_bound());
            println!("{report}");
            Ok(if report.is_pass() { 0 } else { 1 })
        }
        Command::McAsTwisting {
            source,
            target,
            weight,
            element,
        } => {
            let a = load_dg_algebra(&source)?;
            let b = load_dg_algebra(&target)?;
            if a.field() != b.field() {
                bail!("the source and the target are over different fields");
            }
            let conv = deformation_complex(&a, &b, weight)?;
            let x = parse_element(conv.space(), &element)
                .map_err(|m| anyhow!("bad element '{element}': {m}"))?;
            Ok(verdict(
                conv.mc_as_twisting(&x)?,
                "twisting morphism",
                "not a twisting morphism",
            ))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(error) => {
            eprintln!("error: {error:#}");
            ExitCode::from(2)
        }
    }
}
