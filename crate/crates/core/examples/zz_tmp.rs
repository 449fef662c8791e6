use ris_sop::model::*; use ris_sop::optimize::*;
fn main(){
 let seed=9053335809718710104u64;
 let cfg = SystemConfig { n_t:2, n_r:3, n_e:2, n_s:7, alpha: 0.7, beta: 0.9, rho: 1.0, sigma2: 1.0, sigma_e2: 1.0, r_s:1.0 }.with_snr_db(10.0);
 let ch = ChannelSet::rayleigh(&cfg, seed).unwrap();
 let bf = Beamformer::new(random_unit_vector(2, seed, 2).unwrap(), cfg.rho).unwrap();
 let r = sdr_phase_opt(&ch,&bf,&cfg).unwrap();
 println!("sdp {} feas {} conv {} stag {} it {}", r.sdp_value, r.feasible_value, r.converged, r.stagnated, r.iterations);
 let p = SdrProblem::new(&cfg,&ch,&bf).unwrap();
 println!("relaxed(factor) {}", p.relaxed_value(&r.factor));
}
