#include "proxacc/problem.hpp"

#include <iomanip>

namespace proxacc {

const IterationRecord& TraceAccumulator::append(IterationRecord rec) {
  require(rec.manifold_dim >= 0, "record_iteration: negative manifold dim");
  if (!records_.empty()) {
    const IterationRecord& prev = records_.back();
    require(rec.time_s >= prev.time_s, "record_iteration: time went backward");
    require(rec.counters.dominates(prev.counters),
            "record_iteration: counters decreased");
  }
  records_.push_back(std::move(rec));
  return records_.back();
}

void write_trace_csv(std::ostream& os,
                     const std::vector<IterationRecord>& trace) {
  os << "iter,time_s,F,subopt,manifold_dim,n_proxgrad,n_manacc,n_hessvec,"
        "n_f,n_g\n";
  os << std::setprecision(17);
  for (const auto& r : trace) {
    os << r.iter << ',' << r.time_s << ',' << r.f_plus_g << ',';
    if (r.suboptimality)
      os << *r.suboptimality;
    else
      os << "";
    os << ',' << r.manifold_dim << ',' << r.counters.n_proxgrad_steps << ','
       << r.counters.n_manacc_steps << ',' << r.counters.n_hess_vec << ','
       << r.counters.n_f_evals << ',' << r.counters.n_g_evals << '\n';
  }
}

}  // namespace proxacc
