#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "rowlearn/adapter.hpp"
#include "rowlearn/machine.hpp"

namespace rowlearn::testing {

/// Exact model of an adapter: breadth-first search over complete simulator
/// states (identified by fingerprint), then minimisation. Independent of the
/// learner, so it serves as ground truth for learned machines.
inline RowhammerMachine explore(const AdapterConfig& config, std::size_t max_states = 200000) {
  AdapterSession initial(config);
  initial.reset();
  std::vector<AdapterSession> states{initial};
  std::map<std::vector<std::uint64_t>, StateId> ids;
  std::vector<std::uint64_t> fp;
  initial.fingerprint(fp);
  ids.emplace(fp, 0);

  const std::size_t m = config.alphabet.size();
  std::vector<std::vector<std::pair<std::uint32_t, StateId>>> edges;
  for (std::size_t s = 0; s < states.size(); ++s) {
    edges.emplace_back();
    for (std::uint32_t a = 0; a < m; ++a) {
      AdapterSession next = states[s];
      const auto obs = next.step(a);
      fp.clear();
      next.fingerprint(fp);
      auto [it, fresh] = ids.emplace(fp, static_cast<StateId>(states.size()));
      if (fresh) {
        if (states.size() >= max_states) throw Error("explorer state limit reached");
        states.push_back(std::move(next));
      }
      edges[s].emplace_back(static_cast<std::uint32_t>(obs), it->second);
    }
  }
  MealyMachine mealy(states.size(), m, 0);
  for (StateId s = 0; s < states.size(); ++s)
    for (std::uint32_t a = 0; a < m; ++a) mealy.set_transition(s, a, edges[s][a].first, edges[s][a].second);
  return RowhammerMachine::from_mealy(config.alphabet, mealy);
}

}  // namespace rowlearn::testing
