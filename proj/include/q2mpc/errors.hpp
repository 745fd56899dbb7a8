#pragma once

#include <stdexcept>
#include <string>

namespace q2mpc {

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define Q2MPC_ERROR(Name)                                      \
  struct Name : Error {                                        \
    explicit Name(const std::string& what = #Name) : Error(what) {} \
  }

Q2MPC_ERROR(MismatchedFields);
Q2MPC_ERROR(DivisionByZero);
Q2MPC_ERROR(NotPrime);
Q2MPC_ERROR(FieldTooSmall);
Q2MPC_ERROR(FieldTooSmallForPoints);
Q2MPC_ERROR(PlayerOutOfRange);
Q2MPC_ERROR(PlayerCountMismatch);
Q2MPC_ERROR(DimensionMismatch);
Q2MPC_ERROR(Unqualified);
Q2MPC_ERROR(MissingShare);
Q2MPC_ERROR(DealerMismatch);
Q2MPC_ERROR(MspMismatch);
Q2MPC_ERROR(ZeroScalar);
Q2MPC_ERROR(UnassignedInput);
Q2MPC_ERROR(UnknownWire);
Q2MPC_ERROR(MalformedCircuit);
Q2MPC_ERROR(StructureViolation);
Q2MPC_ERROR(DealerDisqualified);
Q2MPC_ERROR(ReconstructionImpossible);
Q2MPC_ERROR(ReplayExhausted);

#undef Q2MPC_ERROR

// Parse failures carry a location so the CLI can point at the offending line.
struct ParseError : Error {
  int line = 0;
  int column = 0;
  ParseError(const std::string& what, int line_, int column_ = 0)
      : Error(what), line(line_), column(column_) {}
};

struct ProtocolAbort : Error {
  explicit ProtocolAbort(const std::string& reason) : Error(reason) {}
};

}  // namespace q2mpc
