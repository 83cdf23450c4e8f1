// Copyright 2026 The btq Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "btq/calculus.hpp"

#include "btq/error.hpp"

namespace btq {

Observable with_fd_derivatives(std::string label, Observable::Fn eval, bool is_real) {
  return Observable(
      std::move(label), eval, [eval](Complex z) { return fd_d_z(eval, z); },
      [eval](Complex z) { return fd_d_zbar(eval, z); },
      [eval](Complex z) { return fd_d_z_zbar(eval, z); }, is_real, false);
}

Observable poisson_bracket(const KahlerModel& model, const Observable& f, const Observable& g) {
  if (!f.has_first_derivatives() || !g.has_first_derivatives()) {
    throw Error(ErrorCode::OracleMissing, "bracket {" + f.label() + "," + g.label() + "}");
  }
  Observable::Fn eval = [model, f, g](Complex z) {
    return kI / model.kahler_density(z) * (f.d_zbar(z) * g.d_z(z) - f.d_z(z) * g.d_zbar(z));
  };
  return with_fd_derivatives("{" + f.label() + "," + g.label() + "}", eval,
                             f.is_real() && g.is_real());
}

Observable laplacian(const KahlerModel& model, const Observable& f) {
  if (!f.has_mixed_derivative()) throw Error(ErrorCode::OracleMissing, "laplacian of " + f.label());
  Observable::Fn eval = [model, f](Complex z) { return f.d_z_zbar(z) / model.kahler_density(z); };
  return with_fd_derivatives("lap(" + f.label() + ")", eval, f.is_real());
}

}  // namespace btq
