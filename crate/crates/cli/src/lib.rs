//! Command-line front end for `weilres`: reads a JSON document, runs one
//! command and writes a JSON report.
//!
//! Exit codes: 0 pass, 1 verification failure, 2 input error, 3 resource
//! bound.

pub mod commands;
pub mod document;
pub mod error;
pub mod suites;

use clap::{Parser, Subcommand};
use serde_json::Value;

pub use document::Document;
pub use error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(name = "weilres", version, about = "Weil restrictions along finite free extensions")]
pub struct Cli {
    /// Input document (JSON); reads stdin when omitted or `-`.
    #[arg(long, global = true)]
    pub input: Option<String>,
    /// Report destination; stdout when omitted.
    #[arg(long, global = true)]
    pub output: Option<String>,
    /// Seed for randomized suites; overrides `options.seed`.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Restrict a presentation along the document's extension.
    Restrict {
        #[arg(long)]
        presentation: Option<String>,
    },
    /// Disc generators y_ij - c_j(r_i X) for radius elements.
    Disc {
        /// Radius element of the extension; repeatable.
        #[arg(long)]
        radius: Vec<String>,
        /// Log-radius of the disc, for Berkovich radii.
        #[arg(long, allow_hyphen_values = true)]
        disc_radius: Option<String>,
    },
    /// Characteristic polynomial of an element.
    Charpoly {
        #[arg(long)]
        element: Option<String>,
    },
    /// Integrality of an element over the valuation ring.
    Integrality {
        #[arg(long)]
        element: Option<String>,
    },
    /// Spectral radius of an element, or the nilpotent witness above a threshold.
    Spectral {
        #[arg(long)]
        element: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        threshold: Option<String>,
    },
    /// Fixed points of the group action on a restriction.
    FixedPoints {
        #[arg(long)]
        presentation: Option<String>,
        #[arg(long)]
        allow_wild: bool,
    },
    /// Enumerate points over finite fields.
    Points {
        #[arg(long)]
        presentation: Option<String>,
        /// `q` or `p^m:c0,c1,...,cm`; repeatable.
        #[arg(long)]
        field: Vec<String>,
        /// Count points of the restriction instead.
        #[arg(long)]
        restricted: bool,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long, allow_hyphen_values = true)]
        threshold: Option<String>,
        #[arg(long)]
        field: Vec<String>,
    },
}

/// Runs a parsed command on a document text. The flag is `false` only when
/// a verification suite fails.
pub fn execute(cli: &Cli, input: &str) -> CliResult<(Value, bool)> {
    let mut doc = Document::from_json(input)?;
    let ok = |v: Value| Ok((v, true));
    match &cli.command {
        Command::Restrict { presentation } => ok(commands::restrict(&doc, presentation.as_deref())?),
        Command::Disc { radius, disc_radius } => ok(commands::disc(&doc, radius, disc_radius.as_deref())?),
        Command::Charpoly { element } => ok(commands::charpoly(&doc, element.as_deref())?),
        Command::Integrality { element } => ok(commands::integrality(&doc, element.as_deref())?),
        Command::Spectral { element, threshold } => {
            ok(commands::spectral(&doc, element.as_deref(), threshold.as_deref())?)
        }
        Command::FixedPoints { presentation, allow_wild } => {
            ok(commands::fixed_points(&doc, presentation.as_deref(), *allow_wild)?)
        }
        Command::Points { presentation, field, restricted } => {
            ok(commands::points(&doc, presentation.as_deref(), field, *restricted)?)
        }
        Command::Verify { suite, threshold, field } => {
            if threshold.is_some() {
                doc.options.threshold = threshold.clone();
            }
            if !field.is_empty() {
                doc.options.test_fields = field.clone();
            }
            commands::verify(&doc, suite, cli.seed)
        }
    }
}

/// Pretty JSON with a trailing newline.
pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}
