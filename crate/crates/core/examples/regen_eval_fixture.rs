//! Regenerates `corpus/synth/fixture.txt`: runs the pipeline on the bundled
//! synthetic corpus at ratio 0.4 and recomputes the coverage metrics with
//! plain kept-set intersection arithmetic, bypassing the evaluation module.
//!
//! Usage: `cargo run -p rhetor --example regen_eval_fixture > corpus/synth/fixture.txt`

use std::collections::BTreeSet;
use std::path::Path;

use rhetor::abstractor::{reduce_document, ReductionTarget, SentenceRef};
use rhetor::catalog::default_catalog;
use rhetor::eval::parse_manifest;
use rhetor::ingest::{split_document, tag_relations};
use rhetor::parser::parse_document;

const RATIO: f64 = 0.4;

fn main() {
    let base = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus/synth");
    let manifest = std::fs::read_to_string(base.join("manifest.txt")).expect("manifest");
    let entries = parse_manifest(&manifest, &base).expect("manifest parses");

    let catalog = default_catalog();
    let mut rows = Vec::new();
    for entry in &entries {
        let raw = std::fs::read_to_string(&entry.path).expect("document readable");
        let doc = tag_relations(split_document(&raw).expect("splits"), catalog);
        let parsed = parse_document(&doc, catalog).expect("parses");
        let selection = reduce_document(&doc, &parsed, catalog, ReductionTarget::Ratio(RATIO))
            .expect("reduces");

        let kept: BTreeSet<SentenceRef> = selection.kept.iter().copied().collect();
        let keys: BTreeSet<SentenceRef> = entry.keys.iter().copied().collect();
        let total = doc.sentence_count();

        let length_ratio = kept.len() as f64 / total as f64;
        let key_coverage = keys.intersection(&kept).count() as f64 / keys.len() as f64;
        let mi = kept.contains(&entry.most_important);
        rows.push((
            entry.doc_id.clone(),
            total,
            kept.len(),
            length_ratio,
            key_coverage,
            mi,
        ));
    }

    for (id, total, kept, lr, kc, mi) in &rows {
        println!(
            "doc id={id} sentences={total} kept={kept} length_ratio={lr:.4} key_coverage={kc:.4} mi_coverage={}",
            u8::from(*mi)
        );
    }
    let n = rows.len() as f64;
    println!(
        "total docs={} length_ratio={:.4} key_coverage={:.4} mi_coverage={:.4}",
        rows.len(),
        rows.iter().map(|r| r.3).sum::<f64>() / n,
        rows.iter().map(|r| r.4).sum::<f64>() / n,
        rows.iter().filter(|r| r.5).count() as f64 / n,
    );
}
