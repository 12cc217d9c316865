use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use spcalc::calculus::{check, System};
use spcalc::corpus::{random_derivation, random_tree_with_nodes, TreeShape};
use spcalc::error::NormalizeError;
use spcalc::normalize::normalize;

fn main() {
    let systems = [
        ("k+", System::K_PLUS),
        ("4", System::K4_PLUS),
        ("m", System { four: false, m: true, j: false }),
        ("j", System { four: false, m: false, j: true }),
        ("4m", System { four: true, m: true, j: false }),
        ("4j", System { four: true, m: false, j: true }),
        ("mj", System { four: false, m: true, j: true }),
        ("rc", System::RC),
    ];
    for (name, sys) in systems {
        let mut rng = ChaCha8Rng::seed_from_u64(7001);
        let mut obstructed = 0;
        let mut ok = 0;
        let start_t = std::time::Instant::now();
        for _ in 0..1000 {
            let start = random_tree_with_nodes(&mut rng, &TreeShape::default(), 6);
            let d = random_derivation(&mut rng, start, &sys, 6, 40);
            check(&d, &sys).unwrap();
            match normalize(&d, &sys) {
                Ok(_) => ok += 1,
                Err(NormalizeError::FourObstruction { .. }) => {
                    obstructed += 1;
                    eprintln!("[{name}] obstructed: {}", serde_json::to_string(&d).unwrap());
                }
                Err(e) => {
                    eprintln!("[{name}] OTHER FAILURE {e}: {}", serde_json::to_string(&d).unwrap());
                }
            }
        }
        println!("{name}: ok={ok} obstructed={obstructed} elapsed={:?}", start_t.elapsed());
    }
}
