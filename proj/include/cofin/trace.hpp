#pragma once

#include <map>
#include <string>
#include <vector>

#include "cofin/core.hpp"

namespace cofin {

struct TraceRecord {
  std::size_t stage = 0;
  std::string step;  // domain | range | hit | code | ...
  std::size_t var = 0;
  Nat a = 0, b = 0;  // the pair added
  bool adds = true;  // false for bookkeeping records (cursor start, case labels)
  std::vector<std::size_t> fp;  // per scheduled word, after this record
  std::map<std::string, std::int64_t> info;  // builder-specific extras
};

struct Trace {
  std::vector<std::string> word_ids;  // aligned with TraceRecord::fp
  std::vector<TraceRecord> records;
  std::size_t arity = 1;

  // replays records [0, upto) into one partial injection per variable
  std::vector<PartialInjection> replay(std::size_t upto) const;
  std::vector<PartialInjection> replay() const { return replay(records.size()); }
  // state at the start of `stage` (all records with smaller stage)
  std::vector<PartialInjection> state_before_stage(std::size_t stage) const;
  std::size_t stage_count() const;
};

}  // namespace cofin
