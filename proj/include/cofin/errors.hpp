#pragma once

#include <stdexcept>
#include <string>

namespace cofin {

// Every failure a builder can report carries the phase it happened in and a
// short context string; the CLI turns these into {phase, cause, context}.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, std::string phase, std::string context)
      : std::runtime_error(kind + " in " + phase + ": " + context),
        kind_(std::move(kind)),
        phase_(std::move(phase)),
        context_(std::move(context)) {}

  const std::string& kind() const noexcept { return kind_; }
  const std::string& phase() const noexcept { return phase_; }
  const std::string& context() const noexcept { return context_; }

 private:
  std::string kind_;
  std::string phase_;
  std::string context_;
};

#define COFIN_ERROR_KIND(Name)                                  \
  class Name : public Error {                                   \
   public:                                                      \
    Name(std::string phase, std::string context)                \
        : Error(#Name, std::move(phase), std::move(context)) {} \
  };

COFIN_ERROR_KIND(SearchExhausted)
COFIN_ERROR_KIND(WindowExhausted)
COFIN_ERROR_KIND(MalformedCode)
COFIN_ERROR_KIND(OrbitsExhausted)
COFIN_ERROR_KIND(NotATree)
COFIN_ERROR_KIND(NotAFixedPoint)
COFIN_ERROR_KIND(WitnessNotFound)
COFIN_ERROR_KIND(ClosureBoundExceeded)
COFIN_ERROR_KIND(UnsupportedPresentation)
COFIN_ERROR_KIND(CapacityExceeded)
COFIN_ERROR_KIND(ArityMismatch)
COFIN_ERROR_KIND(ParseError)
COFIN_ERROR_KIND(InvalidArgument)

#undef COFIN_ERROR_KIND

}  // namespace cofin
