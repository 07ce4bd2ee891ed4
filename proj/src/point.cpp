#include "warped/point.hpp"

#include <cmath>
#include <sstream>
#include <utility>

namespace warped {

EvalPoint make_point(int n, double x0, std::vector<double> xbar, double y0,
                     std::vector<double> ybar) {
  if (n < 2) throw InvalidPointError("make_point: fiber dimension n must be at least 2");
  if (static_cast<int>(xbar.size()) != n || static_cast<int>(ybar.size()) != n) {
    std::ostringstream os;
    os << "make_point: expected xbar and ybar of length " << n << ", got " << xbar.size()
       << " and " << ybar.size();
    throw InvalidPointError(os.str());
  }
  EvalPoint p;
  p.n = n;
  p.x0 = x0;
  p.xbar = std::move(xbar);
  p.y0 = y0;
  p.ybar = std::move(ybar);

  double r2 = 0.0, u2 = 0.0, dot = 0.0;
  for (int i = 0; i < n; ++i) {
    r2 += p.xbar[i] * p.xbar[i];
    u2 += p.ybar[i] * p.ybar[i];
    dot += p.xbar[i] * p.ybar[i];
  }
  p.r = std::sqrt(r2);
  p.u = std::sqrt(u2);
  if (!(p.u > 0.0)) throw InvalidPointError("make_point: |ybar| must be positive");
  p.z = p.y0 / p.u;
  p.s = dot / p.u;
  return p;
}

EvalPoint scale_y(const EvalPoint& p, double lambda) {
  if (!(lambda > 0.0)) throw InvalidPointError("scale_y: lambda must be positive");
  EvalPoint q = p;
  q.y0 *= lambda;
  for (double& v : q.ybar) v *= lambda;
  q.u *= lambda;
  return q;
}

}  // namespace warped
