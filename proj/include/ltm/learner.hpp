#pragma once

#include <vector>

namespace ltm {

// Minimal round interface the experiment harness drives. distribution() is the
// distribution the learner wants sampled this round; update() closes the round.
// Full-information learners ignore `sampled`; bandit learners read only
// loss[sampled].
class Learner {
 public:
  virtual ~Learner() = default;
  virtual int num_actions() const = 0;
  virtual const std::vector<double>& distribution() = 0;
  virtual void update(const std::vector<double>& loss, int sampled) = 0;
};

}  // namespace ltm
