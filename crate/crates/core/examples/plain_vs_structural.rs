//! Two mirror-image nodes far apart in a barbell: plain walks place them
//! apart, structural identifiers place them together.

use rolewalk::embed::cosine;
use rolewalk::graph::generate::barbell;
use rolewalk::pipeline::{embed_graph, RunConfig};
use rolewalk::Variant;

fn main() -> rolewalk::Result<()> {
    let (g, [l, r]) = barbell(6, 10);
    let bridge_mid = 6 + 5;
    for variant in [Variant::Plain, Variant::Sp, Variant::Wl] {
        let cfg = RunConfig {
            variant,
            ..RunConfig::default()
        };
        let emb = embed_graph(&g, &cfg)?.embeddings;
        println!(
            "{variant:>5}: cos(mirror pair) {:+.3}  cos(left, bridge middle) {:+.3}",
            cosine(emb.row(l), emb.row(r)),
            cosine(emb.row(l), emb.row(bridge_mid))
        );
    }
    Ok(())
}
