// Pattern: P15 func
// Expected: Deadlock
//
// As P13, with two channels read through a helper function.
package main

import "fmt"

func receive(ch chan int) int {
	return <-ch
}

func main() {
	first := make(chan int)
	second := make(chan int)
	fmt.Println(receive(first) + receive(second))
}
