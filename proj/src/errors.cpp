#include "gsig/errors.hpp"

namespace gsig {

const char* errc_name(errc code) noexcept {
  switch (code) {
    case errc::index_out_of_range: return "index_out_of_range";
    case errc::self_loop: return "self_loop";
    case errc::duplicate_edge: return "duplicate_edge";
    case errc::non_positive_weight: return "non_positive_weight";
    case errc::degenerate_features: return "degenerate_features";
    case errc::dimension_mismatch: return "dimension_mismatch";
    case errc::too_large: return "too_large";
    case errc::too_few_realizations: return "too_few_realizations";
    case errc::empty_ensemble: return "empty_ensemble";
    case errc::zero_matrix: return "zero_matrix";
    case errc::negative_diagonal: return "negative_diagonal";
    case errc::asymmetric_input: return "asymmetric_input";
    case errc::nonzero_diagonal: return "nonzero_diagonal";
    case errc::operator_not_a_filter: return "operator_not_a_filter";
    case errc::zero_variance_reference: return "zero_variance_reference";
    case errc::bad_input: return "bad_input";
    case errc::singular_system: return "singular_system";
    case errc::infeasible: return "infeasible";
  }
  return "unknown";
}

}  // namespace gsig
