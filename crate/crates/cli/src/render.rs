//! Human-readable and machine-readable renderings of evaluation results and
//! training histories.

use std::fmt::Write as _;

use mixbow_core::corpus::Label;
use mixbow_core::metrics::{ConfusionMatrix, MetricsReport};
use mixbow_core::network::TrainReport;

/// Text table: the confusion matrix, per-class precision/recall/F1, and the
/// three aggregate scores.
pub fn report_table(cm: &ConfusionMatrix, rep: &MetricsReport) -> String {
    let mut out = String::from("confusion matrix (rows gold, columns predicted):\n");
    let _ = write!(out, "{:>10}", "");
    for label in Label::ALL {
        let _ = write!(out, "{:>10}", label.as_str());
    }
    out.push('\n');
    for gold in Label::ALL {
        let _ = write!(out, "{:>10}", gold.as_str());
        for pred in Label::ALL {
            let _ = write!(out, "{:>10}", cm.counts[gold.index()][pred.index()]);
        }
        out.push('\n');
    }
    out.push('\n');
    let _ = writeln!(
        out,
        "{:>10}{:>10}{:>10}{:>10}{:>10}",
        "class", "precision", "recall", "f1", "support"
    );
    for label in Label::ALL {
        let m = rep.per_class[label.index()];
        let _ = writeln!(
            out,
            "{:>10}{:>10.4}{:>10.4}{:>10.4}{:>10}",
            label.as_str(),
            m.precision,
            m.recall,
            m.f1,
            rep.support[label.index()]
        );
    }
    out.push('\n');
    let _ = writeln!(out, "accuracy    {:.4}", rep.accuracy);
    let _ = writeln!(out, "macro f1    {:.4}", rep.macro_f1);
    let _ = writeln!(out, "weighted f1 {:.4}", rep.weighted_f1);
    out
}

/// Machine-readable block: one `metric=value` line per score, six fractional
/// digits, plus integer per-class supports.
pub fn report_kv(rep: &MetricsReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "accuracy={:.6}", rep.accuracy);
    for label in Label::ALL {
        let m = rep.per_class[label.index()];
        let name = label.as_str();
        let _ = writeln!(out, "precision_{name}={:.6}", m.precision);
        let _ = writeln!(out, "recall_{name}={:.6}", m.recall);
        let _ = writeln!(out, "f1_{name}={:.6}", m.f1);
    }
    let _ = writeln!(out, "macro_f1={:.6}", rep.macro_f1);
    let _ = writeln!(out, "weighted_f1={:.6}", rep.weighted_f1);
    for label in Label::ALL {
        let _ = writeln!(out, "support_{}={}", label.as_str(), rep.support[label.index()]);
    }
    out
}

/// Renders a training history: per-epoch loss and validation accuracy plus
/// the chosen epoch.
pub fn train_report_text(report: &TrainReport) -> String {
    let mut out = String::from("train report v1\n");
    let _ = writeln!(out, "epochs={}", report.train_loss.len());
    let _ = writeln!(out, "best_epoch={}", report.best_epoch);
    let _ = writeln!(out, "best_val_accuracy={:.6}", report.best_val_accuracy);
    for (epoch, (loss, acc)) in report.train_loss.iter().zip(&report.val_accuracy).enumerate() {
        let _ = writeln!(out, "epoch {epoch} train_loss={loss:.6} val_accuracy={acc:.6}");
    }
    out
}
