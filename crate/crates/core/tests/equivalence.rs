use lars_core::engine::Config;
use lars_core::workload::{differential, random_instance, Limits};

fn sweep(seeds: std::ops::Range<u64>, config: Config) {
    for seed in seeds {
        let i = random_instance(seed, Limits::default());
        if config.gc && i.program.has_bare_at() {
            continue;
        }
        if let Some(d) = differential(&i.program, &i.stream, &i.background, config).unwrap() {
            panic!(
                "seed {seed}: {d}\nprogram:\n{}\nstream:\n{}background: {:?}",
                i.source, i.stream, i.background
            );
        }
    }
}

#[test]
fn incremental_matches_naive() {
    sweep(0..1500, Config::default());
}

#[test]
fn incremental_without_ssne_matches_naive() {
    sweep(
        0..500,
        Config {
            ssne: false,
            gc: false,
        },
    );
}

#[test]
fn collection_matches_naive() {
    sweep(
        0..500,
        Config {
            ssne: true,
            gc: true,
        },
    );
}
