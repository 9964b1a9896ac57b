#ifndef BUBBLELAB_ERRORS_HPP
#define BUBBLELAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace bubblelab {

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

#define BUBBLELAB_ERROR_TYPE(Name)                                             \
    class Name : public Error {                                                \
      public:                                                                  \
        using Error::Error;                                                    \
    }

BUBBLELAB_ERROR_TYPE(InvalidGrid);
BUBBLELAB_ERROR_TYPE(InvalidParams);
BUBBLELAB_ERROR_TYPE(OutOfRange);
BUBBLELAB_ERROR_TYPE(NoDecay);
BUBBLELAB_ERROR_TYPE(InsufficientData);
BUBBLELAB_ERROR_TYPE(NonPositive);
BUBBLELAB_ERROR_TYPE(SingularPoint);
BUBBLELAB_ERROR_TYPE(DivergentTail);
BUBBLELAB_ERROR_TYPE(TooLarge);
BUBBLELAB_ERROR_TYPE(InvalidInitial);
BUBBLELAB_ERROR_TYPE(GridMismatch);
BUBBLELAB_ERROR_TYPE(MaxNotAtOrigin);
BUBBLELAB_ERROR_TYPE(DomainTooSmall);
BUBBLELAB_ERROR_TYPE(DivergentIntegral);
BUBBLELAB_ERROR_TYPE(IoError);
BUBBLELAB_ERROR_TYPE(ConfigError);

#undef BUBBLELAB_ERROR_TYPE

} // namespace bubblelab

#endif
