#pragma once

// Subcommands of the swapbell tool. Each returns the process exit code:
//   0  all checks pass (or Unsat where Unsat is expected)
//   1  a physics check failed, or Sat where Unsat was expected
//   2  usage error or unreadable input

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "swapbell/quantum.hpp"

namespace swapbell::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitUsage = 2;

/// Parses argv (argv[0] is the program name) and dispatches.
int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

/// The amplitude routes verify-qm compares. Tests swap in a corrupted closed
/// form as a negative control.
struct QmModel {
  std::function<FourPhotonState()> initial_state = make_vw_state;
  std::function<BellBellAmplitudes(const AngleSettings&)> closed_form =
      bell_bell_amplitudes_closed_form;
};

struct VerifyQmOptions {
  std::size_t grid = 256;          // random settings
  std::size_t families = 20;       // random (alpha, beta) per special-zeta family
  std::size_t events = 100000;     // Monte Carlo draws per family representative
  double tol = 1e-12;              // probability / identity residual bound
  double closed_form_tol = 1e-10;  // closed form vs numeric decomposition
  double angle_tol = 1e-9;
  std::uint64_t seed = 42;
};

int verify_qm(const VerifyQmOptions& options, std::ostream& out,
              const QmModel& model = QmModel{});

}  // namespace swapbell::cli
