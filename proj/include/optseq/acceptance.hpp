#pragma once

#include <string>
#include <vector>

#include "optseq/config.hpp"
#include "optseq/parallel.hpp"
#include "optseq/report.hpp"

namespace optseq {

struct AcceptanceLine {
  int id;
  std::string name;
  bool pass;
  std::string detail;
};

struct AcceptanceReport {
  std::vector<AcceptanceLine> lines;
  bool all_pass() const;
};

// The ten acceptance checks at their stated tolerances.  Randomized inputs
// derive from cfg.seed.  With `determinism` set, the first nine checks run a
// second time and the tenth compares both reports byte for byte.
AcceptanceReport run_acceptance(const RunConfig& cfg, Exec exec = Exec::parallel,
                                bool determinism = true);

// Individual checks, numbered as in the report.
AcceptanceLine check_lp_exactness(const RunConfig& cfg, Exec exec);
AcceptanceLine check_embedding_chain(const RunConfig& cfg, Exec exec);
AcceptanceLine check_oracle_equivalence(const RunConfig& cfg, Exec exec);
AcceptanceLine check_index_recovery(const RunConfig& cfg, Exec exec);
AcceptanceLine check_classification(const RunConfig& cfg, Exec exec);
AcceptanceLine check_criterion_constants(const RunConfig& cfg, Exec exec);
AcceptanceLine check_holder_pairing(const RunConfig& cfg, Exec exec);
AcceptanceLine check_tensor_properties(const RunConfig& cfg, Exec exec);
AcceptanceLine check_seqcore_oracles(const RunConfig& cfg, Exec exec);

// The reduced search used for the randomized sweeps of checks 1 and 2.
SearchConfig sweep_search_config(const RunConfig& cfg, Exec exec);

// "PASS  3 oracle_equivalence: ..." per line.
std::string format_line(const AcceptanceLine& line);
Json to_json(const AcceptanceReport& r);
std::string render_lines(const AcceptanceReport& r);

}  // namespace optseq
