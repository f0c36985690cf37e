//! Printed 22x22 coefficient table of `-ln theta_4` in `(x1, x2)`, rows and columns from 0.

pub const PRINTED_THETA4: [&str; 22] = [
    "0 1 1/2 1/3 1/4 1/5 1/6 1/7 1/8 1/9 1/10 1/11 1/12 1/13 1/14 1/15 1/16 1/17 1/18 1/19 1/20 1/21",
    "1 1 1 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0",
    "1/2 1 3/2 1 1/2 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0",
    "1/3 0 1 4/3 1 0 1/3 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0",
    "1/4 0 1/2 1 7/4 1 1/2 0 1/4 0 0 0 0 0 0 0 0 0 0 0 0 0",
    "1/5 0 0 0 1 6/5 1 0 0 0 1/5 0 0 0 0 0 0 0 0 0 0 0",
    "1/6 0 0 1/3 1/2 1 2 1 1/2 1/3 0 0 1/6 0 0 0 0 0 0 0 0 0",
    "1/7 0 0 0 0 0 1 8/7 1 0 0 0 0 0 1/7 0 0 0 0 0 0 0",
    "1/8 0 0 0 1/4 0 1/2 1 15/8 1 1/2 0 1/4 0 0 0 1/8 0 0 0 0 0",
    "1/9 0 0 0 0 0 1/3 0 1 13/9 1 0 1/3 0 0 0 0 0 1/9 0 0 0",
    "1/10 0 0 0 0 1/5 0 0 1/2 1 9/5 1 1/2 0 0 1/5 0 0 0 0 1/10 0",
    "1/11 0 0 0 0 0 0 0 0 0 1 12/11 1 0 0 0 0 0 0 0 0 0",
    "1/12 0 0 0 0 0 1/6 0 1/4 1/3 1/2 1 7/3 1 1/2 1/3 1/4 0 1/6 0 0 0",
    "1/13 0 0 0 0 0 0 0 0 0 0 0 1 14/13 1 0 0 0 0 0 0 0",
    "1/14 0 0 0 0 0 0 1/7 0 0 0 0 1/2 1 12/7 1 1/2 0 0 0 0 1/7",
    "1/15 0 0 0 0 0 0 0 0 0 1/5 0 1/3 0 1 8/5 1 0 1/3 0 1/5 0",
    "1/16 0 0 0 0 0 0 0 1/8 0 0 0 1/4 0 1/2 1 31/16 1 1/2 0 1/4 0",
    "1/17 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 1 18/17 1 0 0 0",
    "1/18 0 0 0 0 0 0 0 0 1/9 0 0 1/6 0 0 1/3 1/2 1 13/6 1 1/2 1/3",
    "1/19 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 1 20/19 1 0",
    "1/20 0 0 0 0 0 0 0 0 0 1/10 0 0 0 0 1/5 1/4 0 1/2 1 21/10 1",
    "1/21 0 0 0 0 0 0 0 0 0 0 0 0 0 1/7 0 0 0 1/3 0 1 32/21",
];
