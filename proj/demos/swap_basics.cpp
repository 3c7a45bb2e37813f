// Walk through one honest swapping round and one attacked round, printing the
// outcome tables. Build target: swap_basics.

#include <cstdio>

#include "esqkd/esqkd.hpp"

int main() {
  using namespace esqkd;

  // honest swapping: Alice's Bell measurement steers Bob's pair
  PureState pairs = tensor(bell_state(BellOutcome::PhiPlus, "1", "2"),
                           bell_state(BellOutcome::PhiPlus, "3", "4"));
  std::printf("honest swapping, no transformation:\n");
  for (const auto& branch : bell_project(pairs, {"1", "3"})) {
    std::printf("  Alice %s  p=%.4f\n", to_string(branch.outcome), branch.probability);
  }

  // the same round with a Hadamard countermeasure, reversed by Bob
  PairDistribution honest = honest_run(kPi / 2, kPi / 2, true);
  std::printf("honest run with reversed Hadamard: P(agree)=%.6f\n", honest.agreement());

  // attacked round at the Hadamard point
  const Convention conv = convention_search().adjudicated;
  const AngleSet hadamard_angles{kPi / 2, kPi / 2, 0, 0};
  ReportPair rep = report(hadamard_angles, Mode::SingleAlice, conv);
  std::printf("attacked single-transformation round at (pi/2, pi/2):\n");
  std::printf("  <P_e> = %.6f   H = %.6f   I_AE = %.6f\n",
              rep.simulation.expected_error, rep.simulation.shannon_entropy,
              rep.simulation.mutual_information);
  return 0;
}
