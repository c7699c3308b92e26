#ifndef HGSIM_VERSION_HPP
#define HGSIM_VERSION_HPP

#define HGSIM_VERSION "1.0.0"

#endif
