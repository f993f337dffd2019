#include "bell/config.hpp"

namespace bell {

Tolerances& tolerances() {
    static Tolerances tol;
    return tol;
}

}  // namespace bell
