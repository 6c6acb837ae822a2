#pragma once

#include <string>

#include "csmc/formula_parser.hpp"
#include "csmc/model_parser.hpp"
#include "csmc/reach_graph.hpp"

namespace fixtures {

// Two-automaton handshake: A offers `go` until B acknowledges, B answers
// `ack` while `go` is up. Reachable chain: s0=(a0,b0) -> s1=(a0,b1) ->
// s2=(a1,b1) -> s3=(a1,b0) -> s3.
inline const char* kToy1 = R"(
automaton A { state a0 emits go; state a1; init a0; arc a0 -> a1 when ack; }
automaton B { state b0; state b1 emits ack; init b0; arc b0 -> b1 when go; arc b1 -> b0 when !go; }
)";

// Three-automaton connection protocol skeleton with a 3-state global cycle
// g0 -> g1 -> g2 -> g0: g0 leaves notConnected, g1 raises sConn, g2 raises
// CGVar while the socket returns to notConnected. CStartVal and SetVarsOkFlg
// are declared on unreachable flag states.
inline const char* kSigChain = R"(
automaton SocketSocket {
  state notConnected;
  state connecting emits sConn;
  state connected;
  init notConnected;
  arc notConnected -> connecting when true;
  arc connecting -> connected when true;
  arc connected -> notConnected when true;
}
automaton CtrlVar {
  state v0;
  state vCG emits CGVar;
  init v0;
  arc v0 -> vCG when sConn;
  arc vCG -> v0 when !sConn;
}
automaton Flags {
  state idle;
  state fStart emits CStartVal;
  state fOk emits SetVarsOkFlg;
  init idle;
  arc idle -> fStart when false;
  arc idle -> fOk when false;
}
)";

inline const char* kSigFormula =
    "A s in {SocketSocket.notConnected}; (N !CGVar) U ((!CStartVal) * "
    "!(in SocketSocket.notConnected)) U SetVarsOkFlg";

// One automaton stepping m0 (emits x) -> m1 (emits y), then stuck on m1;
// M2 contributes an unreachable local state for empty-designator cases.
inline const char* kChain2 = R"(
automaton M { state m0 emits x; state m1 emits y; init m0; arc m0 -> m1 when true; }
automaton M2 { state z0; state z1; init z0; }
)";

// Mimics one step of a connection handshake for the sequence-diagram format.
inline const char* kHandshake = R"(
automaton SocketSocket {
  state h0;
  state h1 emits COnConnect1;
  init h0;
  arc h0 -> h1 when true;
}
automaton ProtVerOnConnect {
  state p0;
  state p1;
  init p0;
  arc p0 -> p1 when COnConnect1;
}
)";

inline csmc::ReachabilityGraph graph(const char* model) {
  return csmc::build_rg(csmc::parse_model(model));
}

inline csmc::Formula formula(const std::string& text,
                             const csmc::ReachabilityGraph& rg) {
  return csmc::parse_formula(text, &rg.net);
}

}  // namespace fixtures
