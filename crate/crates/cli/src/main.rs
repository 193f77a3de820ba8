use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use mixbow::commands::{self, SweepAxis};
use mixbow::config::{self, Overrides};
use mixbow::error::CliError;

/// Bag-of-ngrams sentiment classification for code-mixed tweets: corpus
/// conversion, training, bagging, prediction, and evaluation.
#[derive(Debug, Parser)]
#[command(name = "mixbow", version, max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Config file plus per-key override flags, shared by the training-flavored
/// subcommands.
#[derive(Debug, Args)]
struct RunArgs {
    /// Config file of key=value lines; # starts a comment.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    #[command(flatten)]
    overrides: Overrides,
}

impl RunArgs {
    fn resolve(&self) -> Result<config::RunConfig, CliError> {
        config::resolve(self.config.as_deref(), &self.overrides)
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Convert a CoNLL tweet file to the simple tab-separated format.
    Convert {
        /// CoNLL input file.
        conll: PathBuf,
        /// Simple-format output file.
        output: PathBuf,
    },
    /// Train a classifier; writes the model, vocabulary, and train report.
    Train(RunArgs),
    /// Train a bagged ensemble; writes an ensemble directory.
    Bag(RunArgs),
    /// Predict labels with a saved model file or ensemble directory.
    Predict {
        /// Model file or ensemble directory.
        model: PathBuf,
        /// Simple-format input file (labels may be `-`).
        input: PathBuf,
        /// Output file of "id TAB label" lines.
        output: PathBuf,
        #[command(flatten)]
        args: RunArgs,
    },
    /// Score predictions against gold labels, joining on tweet id.
    Evaluate {
        /// Gold labels: simple-format or "id TAB label" lines.
        gold: PathBuf,
        /// Predicted labels: simple-format or "id TAB label" lines.
        predictions: PathBuf,
    },
    /// Train one model per value of one hyperparameter axis.
    Sweep {
        /// Axis to vary: k, n, num_layers, hidden_size, or mode.
        #[arg(long)]
        axis: String,
        /// Comma-separated values for the axis.
        #[arg(long)]
        values: String,
        #[command(flatten)]
        args: RunArgs,
    },
}

fn run(command: &Command, out: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::Convert { conll, output } => commands::cmd_convert(conll, output, out),
        Command::Train(args) => commands::cmd_train(&args.resolve()?, out),
        Command::Bag(args) => commands::cmd_bag(&args.resolve()?, out),
        Command::Predict { model, input, output, args } => {
            commands::cmd_predict(model, input, output, &args.resolve()?, out)
        }
        Command::Evaluate { gold, predictions } => commands::cmd_evaluate(gold, predictions, out),
        Command::Sweep { axis, values, args } => {
            let axis: SweepAxis = axis.parse()?;
            let values: Vec<String> = values
                .split(',')
                .map(str::trim)
                .filter(|v| !v.is_empty())
                .map(String::from)
                .collect();
            commands::cmd_sweep(&args.resolve()?, axis, &values, out)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Exit 1 on bad usage; --help and --version are successes.
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let mut stdout = std::io::stdout().lock();
    match run(&cli.command, &mut stdout) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
