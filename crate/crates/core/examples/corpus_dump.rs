//! Write the first walks of an anchor in text form, for inspecting what the
//! skip-gram model is trained on.

use rolewalk::graph::generate::star;
use rolewalk::{build_corpus, Variant, WalkParams};

fn main() -> rolewalk::Result<()> {
    let g = star(4);
    let params = WalkParams {
        gamma: 3,
        lambda: 6,
        ..WalkParams::default()
    };
    for variant in [Variant::Plain, Variant::Sp, Variant::Wl] {
        let corpus = build_corpus(&g, variant, &params, 1)?;
        println!("{variant}: {} walks, {} distinct tokens", corpus.walk_count(), corpus.tokens().len());
        for i in 0..params.gamma {
            let walk: Vec<String> = corpus.walk_tokens(i).iter().map(|t| t.render(&g)).collect();
            println!("  {}", walk.join(" "));
        }
    }
    Ok(())
}
