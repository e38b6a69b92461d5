#pragma once

#include <vector>

#include "perikos/serialize.hpp"

namespace perikos::testing {

// One representative job per command; the determinism checks replay them.
inline std::vector<Json> sample_jobs() {
  return {
      Json::parse(R"({"command":"fgl-check","params":{"h":2,"p":3,"u":[3],"order":10,"precision":6},"seed":7})"),
      Json::parse(R"({"command":"period-eval","params":{"h":3,"p":3,"u":[3,9],"prec":5}})"),
      Json::parse(R"({"command":"global-eval","params":{"h":2,"p":5,"u":[5],"prec":4}})"),
      Json::parse(R"({"command":"newton","params":{"p":3,"m":1,"precision":8,"matrix":[[0,3],[1,0]]}})"),
      Json::parse(R"({"command":"kottwitz","params":{"h":4,"d":1}})"),
      Json::parse(R"({"command":"bundles","params":{"h":3}})"),
      Json::parse(R"({"command":"kappa","params":{"p":3,"log_p":1,"log_w":2,"move":2}})"),
      Json::parse(R"({"command":"hecke-check","params":{"E":[[1,2,2]],"F":[[0,1,2]],"length":1}})"),
      Json::parse(R"({"command":"od-mul","params":{"p":2,"h":2,"precision":6,"a":[1,1],"b":[3,2]}})"),
      Json::parse(R"({"command":"act","params":{"action":"Weil","p":3,"h":2,"precision":5,"n":3}})"),
      Json::parse(R"({"command":"commute-check","params":{"p":3,"h":2,"precision":5,"trials":5},"seed":11})"),
  };
}

}  // namespace perikos::testing
