#include "mpc/session.hpp"

#include "doctest.h"

using namespace mpc;

namespace {

std::vector<std::string> run(Session& s, const std::vector<std::string>& lines) {
  std::vector<std::string> out;
  for (const std::string& l : lines)
    for (const std::string& o : s.run_line(l)) out.push_back(o);
  return out;
}

std::string one(Session& s, const std::string& line) {
  auto out = s.run_line(line);
  REQUIRE(out.size() == 1);
  return out[0];
}

}  // namespace

TEST_CASE("declarations are silent and queries answer") {
  Session s;
  CHECK(s.run_line("space S atoms e f").empty());
  CHECK(s.run_line("pf P on S : e=1/3 f=2/3").empty());
  CHECK(s.run_line("cv X on S = (e :-> v(3)) + (!e :-> v(-1))").empty());
  CHECK(one(s, "eval E[P,X]") == "OK E[P,X] = 1/3");
  CHECK(one(s, "eval VAR[P,X]") == "OK VAR[P,X] = 32/9");
  CHECK(s.run_line("rv R = rvof X").empty());
  CHECK(one(s, "eval ERV[P,R]") == "OK ERV[P,R] = 1/3");
  CHECK(one(s, "check PF P") == "OK PF P");
  CHECK(!s.failed());
}

TEST_CASE("comments and blank lines produce nothing") {
  Session s;
  CHECK(s.run_line("").empty());
  CHECK(s.run_line("   ").empty());
  CHECK(s.run_line("# a comment").empty());
  CHECK(s.run_line("space S atoms e f # trailing").empty());
  CHECK(one(s, "elicit 10 0 2 4 # still works") == "OK elicit = 1/3");
}

TEST_CASE("errors fail the line with the command word") {
  Session s;
  CHECK(one(s, "nonsense 1 2 3") == "FAIL nonsense at unknown command");
  CHECK(one(s, "eval E[P,X]") == "FAIL eval at unknown probability function P");
  CHECK(one(s, "space S atoms e e") == "FAIL space at repeated atom e");
  CHECK(one(s, "space S atoms T x") == "FAIL space at reserved atom name T");
  CHECK(one(s, "space S atoms a b c d") == "FAIL space at space larger than --max-atoms");
  CHECK(s.run_line("space S atoms e f").empty());
  CHECK(one(s, "space S atoms g h") == "FAIL space at name already bound");
  CHECK(one(s, "pf P on S : e=1/3") == "FAIL pf at atom f has no weight");
  CHECK(one(s, "pf P on S : e=1/3 f=2/3 e=0") == "FAIL pf at atom e weighted twice");
  CHECK(one(s, "pf P on S : e=1/3 f=1/3") ==
        "FAIL pf at weights sum to 2/3, not 1");
  CHECK(one(s, "pf P on S : e=x f=2/3") == "FAIL pf at bad rational 'x'");
  CHECK(one(s, "table T on S : F=0 e=0 f=0") ==
        "FAIL table at event T has no value");
  CHECK(s.failed());
}

TEST_CASE("a larger atom budget admits larger spaces") {
  Session s(4);
  CHECK(s.run_line("space S atoms a b c d").empty());
}

TEST_CASE("the axiom checks and searches answer per system") {
  Session s;
  auto out = run(s, {"space S atoms e f",
                     "table T on S : F=0 e=0 f=0 e|f=1",
                     "check WPF,BR T",
                     "check PF T"});
  REQUIRE(out.size() == 3);
  CHECK(out[0] == "OK WPF T");
  CHECK(out[1] == "OK BR T");
  CHECK(out[2] == "FAIL PF T modularity at x=e, y=f");
  CHECK(s.failed());
  CHECK(one(s, "check XYZ T") == "FAIL check at unknown axiom system XYZ");
  CHECK(s.run_line("pf P on S : e=1/2 f=1/2").empty());
  CHECK(one(s, "check PF' P") == "OK PF' P");
}

TEST_CASE("summation and mass commands answer inline") {
  Session s;
  CHECK(one(s, "fss sum x of zero(x)") == "OK fss = 1");
  CHECK(one(s, "fss sum x,y of zero(x)*zero(y)+zero(1-x)") == "OK fss = 0");
  CHECK(one(s, "fss sum x of (sum y of zero(x)*zero(y)+zero(1-x))") == "OK fss = 1");
  CHECK(one(s, "fss sum x of zero(x-1)*2+zero(x-2)/2") == "OK fss = 5/2");
  CHECK(one(s, "fss sum x of (zero(x-1)+zero(x-2))^2") == "OK fss = 2");
  CHECK(one(s, "fss sum x of -zero(x)") == "OK fss = -1");
  CHECK(one(s, "fss sum x of zero(x)/zero(x)") ==
        "FAIL fss at division by a non-constant table");
  CHECK(one(s, "fss sum x of (sum x of zero(x))") ==
        "FAIL fss at summed variable x shadows another");
  CHECK(one(s, "pmf x of zero(x-1)*1/2+zero(x-3)*1/2") == "OK pmf mass 1");
  CHECK(one(s, "pmf x of zero(x-1)") == "OK pmf mass 1");
  CHECK(one(s, "pmf x of zero(x-1)*3") == "FAIL pmf at mass 3");
  CHECK(one(s, "pmf x of one(x)") == "FAIL pmf at infinite support");
  CHECK(one(s, "pmf x of zero(x-y)") == "FAIL pmf at variable y is not listed");
  CHECK(one(s, "pmf x,y of zero(x-y)") == "FAIL pmf at infinite support");
  CHECK(one(s, "pmf x,y of zero(x-1)*zero(y-2)") == "OK pmf mass 1");
}

TEST_CASE("multidimensional declarations wire dims, families and tensors") {
  Session s;
  CHECK(s.run_line("dims a b").empty());
  CHECK(one(s, "family W = (a) (b) (a b) (b a)") == "OK family W");
  CHECK(one(s, "family V = (a) (b) (a b)") ==
        "FAIL family V permutation at (b a)");
  CHECK(s.run_line(
             "pff P : (a b) { (a1,b1)=1/2 (a1,b2)=0 (a2,b1)=0 (a2,b2)=1/2 }")
            .empty());
  CHECK(one(s, "check pff P") == "OK pff P");
  CHECK(s.run_line("cv X on a = (a1 :-> v(1)) + (a2 :-> v(-1))").empty());
  CHECK(s.run_line("cv Y on b = (b1 :-> v(1)) + (b2 :-> v(-1))").empty());
  CHECK(one(s, "eval MDE[P,X@a]") == "OK MDE[P,X@a] = 0");
  CHECK(one(s, "eval MDCOV[P,X@a,Y@b]") == "OK MDCOV[P,X@a,Y@b] = 1");
  CHECK(one(s, "check reduction P X@a Y@b") ==
        "OK reduction P X@a Y@b cov=1 corr2=1");
  CHECK(one(s, "jointexists P") ==
        "OK jointexists P witness (a1,b1)=1/2 (a2,b2)=1/2");
  CHECK(one(s, "pff P : (a b) { (a1,b1)=1 (a1,b2)=0 (a2,b1)=0 (a2,b2)=0 }") ==
        "FAIL pff at tensor for (a b) already given");
  CHECK(one(s, "pff Q : (a b) { (a1,b1)=1/2 }") ==
        "FAIL pff at tensor for (a b) is missing entries");
}

TEST_CASE("sized dims and inconsistent families certify failure") {
  Session s;
  CHECK(s.run_line("dims a b c : 2").empty());
  CHECK(s.run_line("pff Q : (a b) { (a1,b1)=1/2 (a1,b2)=0 (a2,b1)=0 (a2,b2)=1/2 }").empty());
  CHECK(s.run_line("pff Q : (a c) { (a1,c1)=1/2 (a1,c2)=0 (a2,c1)=0 (a2,c2)=1/2 }").empty());
  CHECK(s.run_line("pff Q : (b c) { (b1,c1)=0 (b1,c2)=1/2 (b2,c1)=1/2 (b2,c2)=0 }").empty());
  CHECK(one(s, "jointexists Q") ==
        "FAIL jointexists Q at elimination derives 0 <= -1/2");
  CHECK(s.failed());
}

TEST_CASE("configurations, utilities and the decision helpers") {
  Session s;
  auto out = run(s, {"space S atoms e o",
                     "pf P on S : e=1/3 o=2/3",
                     "objects c1 c2",
                     "config opt on S = (e :-> c1 ~> v(10)) || (!e :-> c2 ~> v(0))",
                     "eval EU[P,opt]",
                     "elicit 10 0 2 4",
                     "threshold 10 0 2"});
  REQUIRE(out.size() == 3);
  CHECK(out[0] == "OK EU[P,opt] = 10/3");
  CHECK(out[1] == "OK elicit = 1/3");
  CHECK(out[2] == "OK threshold = 4/5");
  CHECK(one(s, "config bad on S = (e :-> c9)") ==
        "FAIL config at undeclared object c9");
  CHECK(one(s, "elicit 1 0 2 1") ==
        "FAIL elicit at indifference weight is undetermined for these payoffs");
  CHECK(one(s, "threshold 0 0 1") ==
        "FAIL threshold at the threshold needs low < high");
}
