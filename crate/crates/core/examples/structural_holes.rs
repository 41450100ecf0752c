//! Find nodes that span structural holes: rank by similarity to the node of
//! lowest constraint and compare with the constraint ranking itself.

use rolewalk::eval::structural_hole_eval;
use rolewalk::graph::generate::erdos_renyi;
use rolewalk::pipeline::{embed_graph, RunConfig};
use rolewalk::Variant;

fn main() -> rolewalk::Result<()> {
    let g = erdos_renyi(2000, 6.0, 7)?;
    let top_n = 100;
    for variant in [Variant::Sp, Variant::Wl, Variant::Plain] {
        let cfg = RunConfig {
            variant,
            ..RunConfig::default()
        };
        let emb = embed_graph(&g, &cfg)?.embeddings;
        let r = structural_hole_eval(&g, &emb, top_n)?;
        println!(
            "{variant:>5}: {} of {} hits (random {:.1}), spanner {}",
            r.hits, r.top_n, r.random_baseline, r.spanner
        );
    }
    Ok(())
}
