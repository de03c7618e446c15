#pragma once

#include <cstddef>
#include <functional>

namespace boltzgrad {

/// Worker count used when a call does not specify one. Defaults to 1;
/// the CLI sets it from --threads.
unsigned default_threads();
void set_default_threads(unsigned k);

/// Run body(i) for i in [0, count). Results must be written to
/// index-addressed storage so the outcome does not depend on scheduling.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body,
                  unsigned threads = 0);

}  // namespace boltzgrad
