use ccr_reduce::gb::sample::*;
use ccr_reduce::gb::{b_form, GBGrid};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    // bump decay sanity
    for w in [0.0f64, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 8.0] {
        print!("bhat({w:.0})/bhat(0)={:.3e}  ", bump_hat(w) / bump_hat(0.0));
    }
    println!();
    for (n, spacing) in [(5usize, 0.55), (7, 0.45), (9, 0.40), (11, 0.35)] {
        let grid = GBGrid::shell(n, spacing, 0.0);
        let p_max_axis = spacing * ((n - 1) / 2) as f64;
        let alias = std::f64::consts::PI / spacing;
        for hwf in [3.0f64, 4.0, 5.0] {
            let hw = hwf / p_max_axis;
            let sep = alias * 0.8;
            let gap = sep - 2.0 * hw;
            if gap <= 0.05 * hw { println!("n={n} hwf={hwf} no gap"); continue; }
            let t_hw = (gap * 0.7).min(hw);
            let near = RegionBox::new([0.0, -sep / 2.0, 0.0, 0.0], [t_hw, hw, hw, hw]).unwrap();
            let far = RegionBox::new([0.0, sep / 2.0, 0.0, 0.0], [t_hw, hw, hw, hw]).unwrap();
            if !near.is_spacelike(&far) { println!("n={n} hwf={hwf} not spacelike"); continue; }
            let mut rng = ChaCha8Rng::seed_from_u64(5);
            let fs = region_sample_divergence_free(&grid, &near, 4, &mut rng).unwrap();
            let hs = region_sample_divergence_free(&grid, &far, 4, &mut rng).unwrap();
            let mut max_space = 0.0f64;
            let mut max_same = 0.0f64;
            for f in &fs {
                for h in &hs {
                    let b = b_form(f, h).unwrap().abs() / (f.weighted_norm() * h.weighted_norm());
                    max_space = max_space.max(b);
                }
                for h in &fs {
                    let d = f.weighted_norm() * h.weighted_norm();
                    if d > 0.0 { max_same = max_same.max(b_form(f, h).unwrap().abs() / d); }
                }
            }
            println!("n={n:2} sp={spacing:.2} hwf={hwf:.1} hw={hw:.2} sep={sep:.2} t_hw={t_hw:.2}: spacelike {max_space:.3e}  samebox {max_same:.3e}  ratio {:.3e}", max_space / max_same);
        }
    }
}
