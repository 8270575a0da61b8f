#ifndef ITLOG_VERSION_HPP
#define ITLOG_VERSION_HPP

#define ITLOG_VERSION "0.1.0"

#endif
