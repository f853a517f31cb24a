package main

import "fmt"

// Deadlocks at run time, but both channels carry int, so the analysis
// cannot tell them apart and reports no deadlock.
func work(cInt chan int, cStr chan int) {
	fmt.Println(<-cInt)
	fmt.Println(<-cStr)
}

func main() {
	cInt := make(chan int)
	cStr := make(chan int)
	go work(cInt, cStr)

	cStr <- 2
	cInt <- 1
}
